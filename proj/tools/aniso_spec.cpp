// aniso-spec: simulate fields, run the isotropy test, reproduce the
// rejection-rate table and print population quantities.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
// failure, 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "aniso/errors.hpp"
#include "aniso/estimators.hpp"
#include "aniso/experiment.hpp"
#include "aniso/field_sim.hpp"
#include "aniso/population.hpp"
#include "aniso/sample_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json result_json(const aniso::TestResult& r) {
  json j{{"d1_hat", r.d1_hat},
         {"d2_hat", r.d2_hat},
         {"m_hat", r.m_hat},
         {"f4_hat", r.f4_hat},
         {"tau_h0_sq_hat", r.tau_h0_sq_hat},
         {"tau_h0_sq_unclamped", r.tau_h0_sq_unclamped},
         {"tau_h0_sq_plain", r.tau_h0_sq_plain},
         {"statistic", nullable(r.statistic)},
         {"critical", r.critical},
         {"p_value", nullable(r.p_value)},
         {"reject", r.reject},
         {"degenerate", r.degenerate},
         {"radial_terms", r.radial_terms}};
  j["c0_truncation_index"] = r.c0_truncation_index ? json(*r.c0_truncation_index) : json(nullptr);
  return j;
}

std::string ratio_tag(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", r);
  return buf;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const aniso::ExperimentConfig cfg = aniso::parse_config(config_path);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw aniso::IoError("cannot create " + out_dir + ": " + ec.message());
  const auto models = cfg.models();
  const double lambda = cfg.test.lambda;
  const aniso::Seed seed{cfg.seed, 0};
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t n : cfg.n_list) {
      const aniso::Locations locs = aniso::sample_locations(n, lambda, seed.child(0));
      const aniso::SpatialSample sample =
          aniso::simulate_field(models[m], lambda, locs, seed.child(1));
      std::string name = "sample_";
      if (models.size() > 1) name += "r" + ratio_tag(cfg.r_list[m]) + "_";
      name += "n" + std::to_string(n) + ".csv";
      const fs::path path = fs::path(out_dir) / name;
      aniso::write_sample_csv(path, sample);
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

int cmd_test(const std::string& data_path, std::optional<double> lambda,
             const std::string& config_path) {
  aniso::TestConfig test;
  if (!config_path.empty()) {
    test = aniso::parse_config(config_path, aniso::ConfigScope::TestOnly).test;
  }
  if (lambda) test.lambda = *lambda;
  test.validate();
  const aniso::SpatialSample sample = aniso::read_sample_csv(data_path, test.lambda);
  const aniso::IsotropyTester tester(test);
  const aniso::TestResult r = tester.evaluate(sample);
  std::cout << result_json(r).dump(2) << '\n';
  if (r.degenerate) {
    std::cerr << "undecidable: variance estimate " << r.tau_h0_sq_unclamped
              << " is not positive (n=" << sample.size() << ")\n";
    return kExitNumerical;
  }
  std::fprintf(stderr, "n=%zu T=%.4f z=%.4f p=%.4g %s (D1=%.4g D2=%.4g)\n", sample.size(),
               r.statistic, r.critical, r.p_value, r.reject ? "reject isotropy" : "do not reject",
               r.d1_hat, r.d2_hat);
  return 0;
}

int cmd_montecarlo(const std::string& config_path, const std::string& out_dir) {
  aniso::ExperimentConfig cfg = aniso::parse_config(config_path);
  if (!out_dir.empty()) cfg.out_path = out_dir;
  if (cfg.out_path.empty()) throw aniso::ConfigError("no output directory: pass --out or set out");
  std::cerr << aniso::kMonteCarloCsvHeader << '\n';
  aniso::run_montecarlo(cfg, [](const aniso::MonteCarloRow& row) {
    std::cerr << aniso::format_csv_row(row) << '\n';
  });
  std::cout << (fs::path(cfg.out_path) / "montecarlo.csv").string() << '\n';
  return 0;
}

int cmd_oracle(const std::string& model_name, double r, double nu, double ell, int alpha,
               int m_cutoff, const aniso::QuadratureSpec& quad) {
  std::optional<aniso::CovarianceModel> model;
  if (model_name == "gauss-aniso") {
    model = aniso::CovarianceModel::gaussian_aniso(r);
  } else if (model_name == "matern") {
    model = aniso::CovarianceModel::matern(nu, ell);
  } else {
    throw aniso::ConfigError("--model must be gauss-aniso or matern");
  }
  const aniso::M2Value m2 = aniso::population_m2(*model, quad);
  const aniso::TauLimits tau =
      aniso::population_tau_limits(*model, aniso::Taper::cosine(alpha), m_cutoff, quad);
  const json j{{"model", model->describe()},
               {"m2", m2.value},
               {"m2_residual", m2.residual},
               {"d1", m2.d1},
               {"d2", m2.d2},
               {"f4", tau.f4},
               {"tau1_sq", tau.tau1_sq},
               {"tau2_sq", tau.tau2_sq},
               {"kappa12", tau.kappa12},
               {"tau_sq", tau.tau_sq},
               {"tau_h0_sq", tau.tau_h0_sq}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral isotropy test for irregularly spaced spatial data"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_path;
  std::optional<double> lambda;

  auto* sim = app.add_subcommand("simulate", "Simulate one field per (model, n) on the rep-0 stream");
  sim->add_option("--config", config_path, "Experiment config file")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();

  auto* test = app.add_subcommand("test", "Run the isotropy test on an x,y,z CSV sample");
  test->add_option("--data", data_path, "Sample CSV with header x,y,z")->required();
  test->add_option("--lambda", lambda, "Side length of the square domain");
  test->add_option("--config", config_path, "Config file supplying estimator settings");

  auto* mc = app.add_subcommand("montecarlo", "Rejection-rate study over (r, n) cells");
  mc->add_option("--config", config_path, "Experiment config file")->required();
  mc->add_option("--out", out_dir, "Output directory (overrides `out` in the config)");

  std::string model_name = "gauss-aniso";
  double r = 1.0, nu = 3.0, ell = 1.0;
  int alpha = 3, m_cutoff = 80;
  aniso::QuadratureSpec quad;
  auto* oracle = app.add_subcommand("oracle", "Population D1, D2, M2 and variance limits");
  oracle->add_option("--model", model_name, "gauss-aniso or matern");
  oracle->add_option("--r", r, "Anisotropy ratio (gauss-aniso)");
  oracle->add_option("--nu", nu, "Matern smoothness");
  oracle->add_option("--ell", ell, "Matern range");
  oracle->add_option("--alpha", alpha, "Cosine taper exponent");
  oracle->add_option("--m-cutoff", m_cutoff, "Truncation |m_i| <= M of the taper sums");
  oracle->add_option("--panels", quad.panels, "Gauss-Legendre panels");
  oracle->add_option("--tol", quad.tol, "Relative self-convergence tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out_dir);
    if (*test) return cmd_test(data_path, lambda, config_path);
    if (*mc) return cmd_montecarlo(config_path, out_dir);
    if (*oracle) return cmd_oracle(model_name, r, nu, ell, alpha, m_cutoff, quad);
  } catch (const aniso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aniso::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aniso::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const aniso::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
