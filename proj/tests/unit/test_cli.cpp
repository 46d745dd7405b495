#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(ANISO_SPEC_EXE) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("aniso_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
            "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  fs::path dir_;
};

constexpr const char* kSmall =
    "model = \"gauss-aniso\"\nr = [1, 3]\nn = [80]\nreps = 4\na = 6\nlambda = 10\n"
    "a_r = 20\nlambda_r = 40\nseed = 3\ntiming = false\n";

TEST_F(Cli, SimulateThenTest) {
  const fs::path cfg = write("c.toml", kSmall);
  const CliRun sim = run("simulate --config " + cfg.string() + " --out " + (dir_ / "data").string());
  ASSERT_EQ(sim.code, 0);
  ASSERT_TRUE(fs::exists(dir_ / "data" / "sample_r1_n80.csv"));
  ASSERT_TRUE(fs::exists(dir_ / "data" / "sample_r3_n80.csv"));

  const CliRun t = run("test --data " + (dir_ / "data" / "sample_r3_n80.csv").string() +
                    " --config " + cfg.string());
  ASSERT_EQ(t.code, 0) << t.out;
  const auto j = nlohmann::json::parse(t.out);
  EXPECT_TRUE(j.contains("statistic"));
  EXPECT_TRUE(j.contains("reject"));
  EXPECT_DOUBLE_EQ(j["m_hat"].get<double>(), j["d1_hat"].get<double>() - j["d2_hat"].get<double>());
}

TEST_F(Cli, TestLambdaFlagAndDefaults) {
  const fs::path data = write("p.csv", "x,y,z\n0,0,1\n1,1,-1\n-2,3,0.5\n4,-4,2\n5,5,-0.3\n");
  const CliRun t = run("test --data " + data.string() + " --lambda 12");
  EXPECT_TRUE(t.code == 0 || t.code == 3) << t.code;
  EXPECT_FALSE(nlohmann::json::parse(t.out).empty());
}

TEST_F(Cli, DegenerateSampleExitsNumerical) {
  const fs::path data = write("zero.csv", "x,y,z\n0,0,0\n1,1,0\n-2,3,0\n4,-4,0\n5,5,0\n");
  EXPECT_EQ(run("test --data " + data.string() + " --lambda 12").code, 3);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("montecarlo --config " + write("bad.toml", "n = [100]\nbogus = 1\n").string() +
                " --out " + dir_.string())
                .code,
            2);
  EXPECT_EQ(run("montecarlo --config " + write("r.toml", "n=[100]\nalpha_level=1.5\n").string() +
                " --out " + dir_.string())
                .code,
            2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("oracle --model cauchy").code, 2);
  const fs::path data = write("p.csv", "x,y,z\n0,0,1\n");
  EXPECT_EQ(run("test --data " + data.string() + " --lambda 12").code, 2);  // n < 4
  EXPECT_EQ(run("test --data " + write("h.csv", "a,b\n1,2\n").string()).code, 2);
}

TEST_F(Cli, IoErrorsExitFour) {
  EXPECT_EQ(run("test --data " + (dir_ / "missing.csv").string()).code, 4);
  EXPECT_EQ(run("montecarlo --config " + (dir_ / "missing.toml").string() + " --out x").code, 4);
  const fs::path blocker = write("blocker", "file");
  EXPECT_EQ(run("montecarlo --config " + write("c.toml", kSmall).string() + " --out " +
                (blocker / "sub").string())
                .code,
            4);
}

TEST_F(Cli, MonteCarloWritesCsvAndJson) {
  const fs::path cfg = write("c.toml", kSmall);
  const CliRun mc = run("montecarlo --config " + cfg.string() + " --out " + (dir_ / "mc").string());
  ASSERT_EQ(mc.code, 0);
  std::ifstream csv(dir_ / "mc" / "montecarlo.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "r,n,reps,rejections,rate,rate_se,mean_statistic,mean_m_hat,degenerate,wall_seconds");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 2);
  std::ifstream js(dir_ / "mc" / "montecarlo.json");
  const auto doc = nlohmann::json::parse(js);
  EXPECT_EQ(doc["rows"].size(), 2u);
}

TEST_F(Cli, OracleJson) {
  const CliRun o = run("oracle --model gauss-aniso --r 1 --panels 32");
  ASSERT_EQ(o.code, 0);
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["d1"].get<double>(), 15.5031383401, 1e-6);
  EXPECT_LT(std::abs(j["m2_residual"].get<double>()), 1e-3);
  EXPECT_GT(j["tau_h0_sq"].get<double>(), 0.0);
  EXPECT_EQ(run("oracle --model matern --nu 3 --ell 1 --panels 32").code, 0);
}

TEST_F(Cli, OracleQuadratureFailureExitsThree) {
  EXPECT_EQ(run("oracle --model matern --panels 1 --tol 1e-14").code, 3);
}

}  // namespace
