#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aniso/covariance.hpp"
#include "aniso/estimators.hpp"
#include "aniso/rng.hpp"

namespace aniso {

/// Monte Carlo design. Text form is one `key = value` per line:
///
///   model       = "gauss-aniso" | "matern"
///   r           = 1.0 | [1, 2, 3, 4]        (gauss-aniso only)
///   nu, ell     = 3.0, 1.0                  (matern only)
///   n           = [1000, 2000]
///   reps        = 200
///   alpha_level = 0.05
///   a, lambda, a_r, lambda_r, alpha, truncate_c0, taper ("cos" | "rect")
///   seed        = 1
///   threads     = "auto" | 4
///   timing      = true   (false writes wall_seconds = 0 for byte-stable CSVs)
///   out         = "results"
///
/// Pairs may also share a line, separated by whitespace. `#` starts a
/// comment. Unknown and duplicate keys are rejected.
struct ExperimentConfig {
  std::string model = "gauss-aniso";
  std::vector<double> r_list{1.0};
  double nu = 3.0;
  double ell = 1.0;
  std::vector<std::size_t> n_list;
  std::size_t reps = 200;
  TestConfig test;
  std::uint64_t seed = 1;
  std::optional<unsigned> threads;  // nullopt = hardware concurrency
  bool timing = true;
  std::string out_path;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  /// One model per table row group: each r for gauss-aniso, one for matern.
  std::vector<CovarianceModel> models() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Experiment validates the whole design; TestOnly checks just the
/// estimator keys, for running a single test on supplied data.
enum class ConfigScope { Experiment, TestOnly };

ExperimentConfig parse_config_text(const std::string& text,
                                   ConfigScope scope = ConfigScope::Experiment);
ExperimentConfig parse_config(const std::filesystem::path& path,
                              ConfigScope scope = ConfigScope::Experiment);
std::string serialize_config(const ExperimentConfig& config);

/// Thread count after the ANISO_THREADS override and `auto` resolution.
unsigned resolve_threads(const ExperimentConfig& config);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Every index
/// runs exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct ReplicationOutcome {
  TestResult result;
  bool failed = false;      // simulation or estimation threw
  std::string error;
  double seconds = 0.0;
};

/// Replication `rep` of one cell: locations from Seed{seed, rep}.child(0),
/// field values from .child(1).
ReplicationOutcome run_replication(const IsotropyTester& tester, const CovarianceModel& model,
                                   std::size_t n, std::uint64_t seed, std::size_t rep);

/// Single test on the first model and first n of `config`. A degenerate
/// variance is reported through TestResult::degenerate.
TestResult run_single(const ExperimentConfig& config, const Seed& seed);

struct MonteCarloRow {
  double r = 1.0;  // anisotropy ratio; 1 for matern
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t rejections = 0;
  double rate = 0.0;
  double rate_se = 0.0;
  double mean_statistic = 0.0;  // over replications with a decided test
  double mean_m_hat = 0.0;      // over replications that completed
  std::size_t degenerate = 0;
  std::size_t failures = 0;
  double wall_seconds = 0.0;
};

inline constexpr const char* kMonteCarloCsvHeader =
    "r,n,reps,rejections,rate,rate_se,mean_statistic,mean_m_hat,degenerate,wall_seconds";

/// Aggregates replication outcomes in index order.
MonteCarloRow aggregate_row(double r, std::size_t n, const std::vector<ReplicationOutcome>& outcomes,
                            double wall_seconds);

std::string format_csv_row(const MonteCarloRow& row);

/// Runs every (model, n) cell. When config.out_path is set, rows are
/// appended to montecarlo.csv.partial as cells finish; on success the file
/// is renamed to montecarlo.csv and montecarlo.json is written.
std::vector<MonteCarloRow> run_montecarlo(
    const ExperimentConfig& config,
    const std::function<void(const MonteCarloRow&)>& on_row = nullptr);

}  // namespace aniso
