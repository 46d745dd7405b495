#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "aniso/errors.hpp"
#include "aniso/experiment.hpp"

namespace aniso {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aniso_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

// Small but complete design: tiny grids keep a replication in milliseconds.
ExperimentConfig small_design() {
  return parse_config_text(
      "model = \"gauss-aniso\"\n"
      "r = [1, 4]\n"
      "n = [60]\n"
      "reps = 7\n"
      "a = 6\n"
      "lambda = 10\n"
      "a_r = 20\n"
      "lambda_r = 40\n"
      "seed = 99\n"
      "timing = false\n");
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) { ::setenv("ANISO_THREADS", value, 1); }
  ~ThreadsEnv() { ::unsetenv("ANISO_THREADS"); }
};

TEST(Config, MinimalFileFillsDefaults) {
  const ExperimentConfig c = parse_config_text("model=\"gauss-aniso\" r=1.0 n=[2000] reps=10");
  EXPECT_EQ(c.model, "gauss-aniso");
  EXPECT_EQ(c.r_list, std::vector<double>{1.0});
  EXPECT_EQ(c.n_list, std::vector<std::size_t>{2000});
  EXPECT_EQ(c.reps, 10u);
  EXPECT_EQ(c.test, TestConfig{});
  EXPECT_EQ(c.test.lambda, 30.0);
  EXPECT_EQ(c.test.a, 80);
  EXPECT_EQ(c.test.lambda_r, 300.0);
  EXPECT_EQ(c.test.a_r, 800);
  EXPECT_EQ(c.test.alpha_level, 0.05);
  EXPECT_EQ(c.test.taper, Taper::cosine(3));
}

TEST(Config, RangeErrorsNameTheConstraint) {
  try {
    parse_config_text("n = [2000]\nalpha_level = 1.5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha_level"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config_text("n = [2000]\nreps = 0\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = []\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [3]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nr = -1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\ntaper = \"rect\"\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nalpha = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nthreads = 0\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nmodel = \"cauchy\"\n"), ConfigError);
}

TEST(Config, UnknownKeysListed) {
  try {
    parse_config_text("n = [100]\nfoo = 1\nbar = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string w = e.what();
    EXPECT_NE(w.find("foo"), std::string::npos);
    EXPECT_NE(w.find("bar"), std::string::npos);
  }
}

TEST(Config, SyntaxErrors) {
  EXPECT_THROW(parse_config_text("n = [100]\nn = [200]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n [100]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nmodel = \"matern\nnu=1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nreps = ten\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\nnu = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("model = \"matern\"\nn = [100]\nr = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = [100]\ntiming = yes\n"), ConfigError);
}

TEST(Config, CommentsAndMatern) {
  const ExperimentConfig c = parse_config_text(
      "# Matern null\n"
      "model = \"matern\"   # isotropic\n"
      "nu = 1.5\n"
      "ell = 2\n"
      "n = [500, 1000]\n"
      "threads = 3\n"
      "out = \"res#1\"\n");
  EXPECT_EQ(c.model, "matern");
  EXPECT_EQ(c.nu, 1.5);
  EXPECT_EQ(c.ell, 2.0);
  EXPECT_EQ(c.threads, 3u);
  EXPECT_EQ(c.out_path, "res#1");
  ASSERT_EQ(c.models().size(), 1u);
  EXPECT_TRUE(c.models()[0].is_isotropic());
}

TEST(Config, RoundTrip) {
  for (const char* text : {
           "model=\"gauss-aniso\" r=1.0 n=[2000] reps=10",
           "model = \"matern\"\nnu = 2.5\nell = 0.75\nn = [100, 200]\nthreads = 2\ntiming = false\n",
           "r = [1, 2.5, 4]\nn = [64]\na = 7\nlambda = 12.5\na_r = 33\nlambda_r = 0.1\nalpha = 4\n"
           "truncate_c0 = false\nseed = 18446744073709551615\nout = \"x/y\"\nalpha_level = 0.1\n",
       }) {
    const ExperimentConfig c = parse_config_text(text);
    const std::string once = serialize_config(c);
    EXPECT_EQ(parse_config_text(once), c) << once;
    EXPECT_EQ(serialize_config(parse_config_text(once)), once);
  }
}

TEST(Config, TestOnlyScopeSkipsDesignKeys) {
  EXPECT_THROW(parse_config_text("a = 40\n"), ConfigError);
  const ExperimentConfig c = parse_config_text("a = 40\nlambda = 20\n", ConfigScope::TestOnly);
  EXPECT_EQ(c.test.a, 40);
  EXPECT_THROW(parse_config_text("taper = \"rect\"\n", ConfigScope::TestOnly), ConfigError);
}

TEST(Config, FileErrors) {
  EXPECT_THROW(parse_config("/nonexistent/dir/cfg.toml"), IoError);
  const fs::path dir = scratch_dir("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.toml") << "n = [100]\nreps = 3\n";
  EXPECT_EQ(parse_config(dir / "c.toml").reps, 3u);
  fs::remove_all(dir);
}

TEST(Threads, EnvironmentOverride) {
  ExperimentConfig c = small_design();
  c.threads = 5;
  EXPECT_EQ(resolve_threads(c), 5u);
  {
    ThreadsEnv env("2");
    EXPECT_EQ(resolve_threads(c), 2u);
  }
  {
    ThreadsEnv env("zero");
    EXPECT_THROW(resolve_threads(c), ConfigError);
  }
  c.threads.reset();
  EXPECT_GE(resolve_threads(c), 1u);
}

TEST(ParallelFor, RunsEachIndexOnceAndPropagates) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(50, 3,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Aggregate, SingleReplication) {
  ReplicationOutcome o;
  o.result.reject = true;
  o.result.statistic = 2.5;
  o.result.m_hat = 0.3;
  const MonteCarloRow row = aggregate_row(4.0, 100, {o}, 1.25);
  EXPECT_EQ(row.rejections, 1u);
  EXPECT_EQ(row.rate, 1.0);
  EXPECT_EQ(row.rate_se, 0.0);
  EXPECT_EQ(row.mean_statistic, 2.5);
  o.result.reject = false;
  const MonteCarloRow none = aggregate_row(4.0, 100, {o}, 0.0);
  EXPECT_EQ(none.rate, 0.0);
  EXPECT_EQ(none.rate_se, 0.0);
}

TEST(Aggregate, CountsDegenerateAndFailures) {
  std::vector<ReplicationOutcome> outs(4);
  outs[0].result.statistic = 1.0;
  outs[0].result.m_hat = 1.0;
  outs[1].result.statistic = 3.0;
  outs[1].result.reject = true;
  outs[1].result.m_hat = 2.0;
  outs[2].result.degenerate = true;
  outs[2].result.m_hat = 6.0;
  outs[3].failed = true;
  const MonteCarloRow row = aggregate_row(1.0, 10, outs, 0.0);
  EXPECT_EQ(row.reps, 4u);
  EXPECT_EQ(row.rejections, 1u);
  EXPECT_EQ(row.rate, 0.25);
  EXPECT_NEAR(row.rate_se, std::sqrt(0.25 * 0.75 / 4.0), 1e-16);
  EXPECT_EQ(row.degenerate, 1u);
  EXPECT_EQ(row.failures, 1u);
  EXPECT_EQ(row.mean_statistic, 2.0);
  EXPECT_EQ(row.mean_m_hat, 3.0);
  EXPECT_EQ(format_csv_row(row), "1,10,4,1,0.25," + [] {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", std::sqrt(0.25 * 0.75 / 4.0));
    return std::string(b);
  }() + ",2,3,1,0");
}

TEST(Aggregate, EmptyMeansPrintAsNan) {
  ReplicationOutcome o;
  o.failed = true;
  const MonteCarloRow row = aggregate_row(2.0, 10, {o}, 0.0);
  EXPECT_EQ(format_csv_row(row), "2,10,1,0,0,0,nan,nan,0,0");
}

TEST(Replication, FailureIsCapturedNotThrown) {
  const IsotropyTester tester(small_design().test);
  const ReplicationOutcome o = run_replication(tester, CovarianceModel::gaussian_aniso(1.0), 2, 1, 0);
  EXPECT_TRUE(o.failed);
  EXPECT_FALSE(o.error.empty());
}

TEST(Replication, SeedsByRepIndex) {
  const IsotropyTester tester(small_design().test);
  const auto model = CovarianceModel::gaussian_aniso(1.0);
  const ReplicationOutcome a = run_replication(tester, model, 60, 5, 3);
  const ReplicationOutcome b = run_replication(tester, model, 60, 5, 3);
  const ReplicationOutcome c = run_replication(tester, model, 60, 5, 4);
  ASSERT_FALSE(a.failed);
  EXPECT_EQ(a.result.statistic, b.result.statistic);
  EXPECT_NE(a.result.statistic, c.result.statistic);
}

TEST(RunSingle, DeterministicContract) {
  ExperimentConfig c = small_design();
  c.n_list = {200};
  const TestResult a = run_single(c, {8, 0});
  const TestResult b = run_single(c, {8, 0});
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.d1_hat, b.d1_hat);
  EXPECT_TRUE(std::isfinite(a.statistic));
  EXPECT_GE(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
}

TEST(MonteCarlo, OutputsAndThreadIndependence) {
  const fs::path d1 = scratch_dir("mc1"), d3 = scratch_dir("mc3");
  ExperimentConfig c = small_design();
  c.out_path = d1.string();
  std::vector<MonteCarloRow> streamed;
  {
    ThreadsEnv env("1");
    run_montecarlo(c, [&](const MonteCarloRow& r) { streamed.push_back(r); });
  }
  c.out_path = d3.string();
  std::vector<MonteCarloRow> rows;
  {
    ThreadsEnv env("3");
    rows = run_montecarlo(c);
  }
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(streamed.size(), 2u);
  EXPECT_EQ(rows[0].r, 1.0);
  EXPECT_EQ(rows[1].r, 4.0);
  EXPECT_EQ(rows[0].reps, 7u);
  EXPECT_EQ(rows[0].wall_seconds, 0.0);

  const std::string csv = slurp(d1 / "montecarlo.csv");
  EXPECT_EQ(csv, slurp(d3 / "montecarlo.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kMonteCarloCsvHeader);
  EXPECT_FALSE(fs::exists(d1 / "montecarlo.csv.partial"));
  // the embedded config differs in `out`; the rows follow it
  const std::string j1 = slurp(d1 / "montecarlo.json"), j3 = slurp(d3 / "montecarlo.json");
  ASSERT_NE(j1.find("\"rows\""), std::string::npos);
  EXPECT_EQ(j1.substr(j1.find("\"rows\"")), j3.substr(j3.find("\"rows\"")));
  fs::remove_all(d1);
  fs::remove_all(d3);
}

TEST(MonteCarlo, UnwritableOutputIsIoError) {
  const fs::path d = scratch_dir("ro");
  fs::create_directories(d.parent_path());
  std::ofstream(d) << "a file, not a directory";
  ExperimentConfig c = small_design();
  c.out_path = (d / "sub").string();
  EXPECT_THROW(run_montecarlo(c), IoError);
  fs::remove_all(d);
}

}  // namespace
}  // namespace aniso
