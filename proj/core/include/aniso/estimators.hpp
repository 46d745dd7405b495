#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <memory>
#include <optional>

#include "aniso/field_sim.hpp"
#include "aniso/frequency_grid.hpp"
#include "aniso/spectral_transform.hpp"
#include "aniso/taper.hpp"

namespace aniso {

/// Tuning of the isotropy test. Defaults follow the reference simulation
/// design: (a, lambda) = (80, 30) for the inner frequency grid and
/// (a_r, lambda_r) = (800, 300) for the radial grid of the D2 estimator.
struct TestConfig {
  int a = 80;
  double lambda = 30.0;
  int a_r = 800;
  double lambda_r = 300.0;
  double alpha_level = 0.05;
  Taper taper = Taper::cosine(3);
  bool truncate_c0 = true;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  FrequencyGrid grid() const { return FrequencyGrid{a, lambda, true}; }

  /// Radial arguments pi (2 r + 1) / lambda_r, r = 0 .. a_r - 1.
  Eigen::VectorXd radial_arguments() const;

  friend bool operator==(const TestConfig&, const TestConfig&) = default;
};

struct TestResult {
  double d1_hat = 0.0;
  double d2_hat = 0.0;
  double m_hat = 0.0;
  double f4_hat = 0.0;
  double tau_h0_sq_hat = 0.0;        // bias-corrected, clamped at 0
  double tau_h0_sq_unclamped = 0.0;  // bias-corrected before clamping
  double tau_h0_sq_plain = 0.0;      // 2 (2 pi)^2 F_hat sum_m H^4/H(0)^4
  double statistic = 0.0;
  double critical = 0.0;
  double p_value = 1.0;
  bool reject = false;
  bool degenerate = false;           // tau_h0_sq_unclamped <= 0, test undecidable
  std::optional<int> c0_truncation_index;
  int radial_terms = 0;              // R actually summed in D2_hat
};

/// Per-frequency sum over E~ = {j1 != j2, j1 != j4, j2 != j3, j3 != j4} of
/// w_{j1} w_{j2} w_{j3} w_{j4} exp(i (s_{j1} - s_{j2} + s_{j3} - s_{j4}) . omega_k),
/// assembled from S, T and the diagonal weights:
///   |S|^4 - 4 D |S|^2 + 2 D^2 + 4 Re(S conj T) - 3 Q4.
Eigen::MatrixXd restricted_fourth_order_sums(const TaperedDftField& dft);

/// Efficient D1 estimator (2 pi lambda)^2 / (2 n^4 H(0)^2) sum_k [E~ sum](k).
double d1_efficient(const TaperedDftField& dft);
double d1_efficient(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid);

/// Bessel weights J0(rho |omega_k|) for a fixed frequency grid and radii.
/// Frequencies sharing |omega_k| are pooled first, so the table is
/// radii x (number of distinct per-coordinate magnitude pairs).
class RadialKernel {
 public:
  RadialKernel(const FrequencyGrid& grid, const Eigen::VectorXd& radii);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& radii() const noexcept { return radii_; }
  std::size_t classes() const noexcept { return class_norms_.size(); }

  /// sum_k values(k) J0(radii(r) |omega_k|) for every radius.
  Eigen::VectorXd apply(const Eigen::MatrixXd& values) const;

 private:
  FrequencyGrid grid_;
  Eigen::VectorXd radii_;
  std::vector<int> coord_key_;       // per coordinate index -> magnitude key
  std::vector<double> class_norms_;
  Eigen::MatrixXi class_of_;         // (k1, k2) -> class id
  Eigen::MatrixXd table_;            // radii x classes
};

/// c0_hat(rho) = sum_k (|S(k)|^2 - sum_j w_j^2) J0(rho |omega_k|) / (n^2 H(0)):
/// the j1 != j2 double sum evaluated through the DFT identity.
Eigen::VectorXd c0_hat(const TaperedDftField& dft, const RadialKernel& kernel);
Eigen::VectorXd c0_hat(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
                       const Eigen::VectorXd& r_values);

struct D2Estimate {
  double value = 0.0;
  int truncation_index = 0;  // number of radial terms summed (R)
  bool empty = false;        // R == 0, value forced to 0
};

/// (2 pi)^4 / lambda_r sum_{r < R} rho_r c0_hat(rho_r)^2 on the radial grid of
/// `config`; R is a_r, or with truncation the first r where c0_hat < 0.
D2Estimate d2_efficient(const Eigen::VectorXd& c0_values, const TestConfig& config);
D2Estimate d2_efficient(const SpatialSample& sample, const TestConfig& config);

/// (1/24) (2 pi / lambda)^2 sum_k Itilde(k)^4 with Itilde the density-scale
/// periodogram, consistent for \int f^4.
double f4_hat(const TaperedDftField& dft);
double f4_hat(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid);

struct TauEstimate {
  double value = 0.0;       // clamped at 0
  double unclamped = 0.0;
  bool clamped = false;
};

/// Bias-corrected null variance
/// (2 pi)^4 lambda^6 / (12 n^8 H(0)^8) sum_m H(m)^4 sum_k [E~ sum](k)^2.
TauEstimate tau_h0_biascorrected(const TaperedDftField& dft);
TauEstimate tau_h0_biascorrected(const SpatialSample& sample, const Taper& taper,
                                 const FrequencyGrid& grid);

/// Plain estimator 2 (2 pi)^2 F_hat sum_m H(m)^4 / H(0)^4.
double tau_h0_plain(const TaperedDftField& dft);

/// Rejection rule: strictly greater than the critical value.
constexpr bool exceeds_critical(double statistic, double critical) noexcept {
  return statistic > critical;
}

/// Reusable test evaluator: builds the radial Bessel table once per config.
class IsotropyTester {
 public:
  explicit IsotropyTester(TestConfig config);

  const TestConfig& config() const noexcept { return config_; }

  /// Full statistic. A non-positive variance estimate is reported through
  /// TestResult::degenerate (no rejection) rather than thrown.
  TestResult evaluate(const SpatialSample& sample) const;

 private:
  TestConfig config_;
  std::shared_ptr<const RadialKernel> kernel_;
  double critical_;
};

/// Level-alpha test: reject iff lambda (D1 - D2) / tau_hat > z_{1-alpha}.
/// Throws InvalidArgument for a non-smooth taper or n < 4 and
/// DegenerateVariance when tau_hat^2 <= 0.
TestResult isotropy_test(const SpatialSample& sample, const TestConfig& config);

}  // namespace aniso
