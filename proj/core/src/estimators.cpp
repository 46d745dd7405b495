#include "aniso/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "aniso/bessel.hpp"
#include "aniso/detail/summation.hpp"
#include "aniso/errors.hpp"
#include "aniso/normal.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double matrix_sum(const Eigen::MatrixXd& m) {
  return detail::pairwise_sum<double>({m.data(), static_cast<std::size_t>(m.size())});
}

// Sum over m in [-a, a-1]^2 of H_2(m)^4; the weights factor per coordinate.
double h4_weight_sum(const Taper& taper, int a) {
  const double s = h1_power_sum(taper, -a, a - 1, 4);
  return s * s;
}

void require_smooth(const Taper& taper) {
  if (!taper.is_smooth()) {
    throw InvalidArgument(
        "isotropy_test: the taper must be twice continuously differentiable "
        "(cosine power alpha >= 3); untapered statistics carry a non-negligible "
        "edge-effect bias in dimension >= 2");
  }
}

}  // namespace

void TestConfig::validate() const {
  if (a < 1) throw ConfigError("a must be a positive integer");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (a_r < 1) throw ConfigError("a_r must be a positive integer");
  if (!(lambda_r > 0.0) || !std::isfinite(lambda_r)) throw ConfigError("lambda_r must be positive");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw ConfigError("alpha_level must lie in (0, 1)");
}

Eigen::VectorXd TestConfig::radial_arguments() const {
  Eigen::VectorXd out(a_r);
  for (int r = 0; r < a_r; ++r) out(r) = kPi * (2.0 * r + 1.0) / lambda_r;
  return out;
}

Eigen::MatrixXd restricted_fourth_order_sums(const TaperedDftField& dft) {
  const ComplexMatrix& s = dft.sums();
  const ComplexMatrix& t = dft.cubic_sums();
  const double d = dft.diag_weight();
  const double q4 = dft.quartic_weight();
  Eigen::MatrixXd out(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double p = std::norm(s(i, j));
      const double cross = (s(i, j) * std::conj(t(i, j))).real();
      out(i, j) = p * p - 4.0 * d * p + 2.0 * d * d + 4.0 * cross - 3.0 * q4;
    }
  }
  return out;
}

double d1_efficient(const TaperedDftField& dft) {
  if (dft.n() < 2) throw InvalidArgument("d1_efficient: need at least 2 points");
  const double n2 = static_cast<double>(dft.n()) * static_cast<double>(dft.n());
  const double lambda = dft.grid().lambda;
  const double pref = (kTwoPi * lambda) * (kTwoPi * lambda) / (2.0 * n2 * n2 * dft.h0() * dft.h0());
  return pref * matrix_sum(restricted_fourth_order_sums(dft));
}

double d1_efficient(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid) {
  return d1_efficient(weighted_dft(sample, taper, grid));
}

RadialKernel::RadialKernel(const FrequencyGrid& grid, const Eigen::VectorXd& radii)
    : grid_(grid), radii_(radii) {
  grid_.validate();
  for (Eigen::Index r = 0; r < radii_.size(); ++r) {
    if (!(radii_(r) >= 0.0) || !std::isfinite(radii_(r))) {
      throw InvalidArgument("RadialKernel: radii must be finite and nonnegative");
    }
    if (r > 0 && radii_(r) < radii_(r - 1)) {
      throw InvalidArgument("RadialKernel: radii must be increasing");
    }
  }
  // |omega| per coordinate is pi * key / lambda with an integer key.
  const int side = grid_.side();
  coord_key_.resize(side);
  for (int c = 0; c < side; ++c) {
    const int k = c - grid_.a;
    coord_key_[c] = grid_.shifted ? std::abs(2 * k + 1) : std::abs(2 * k);
  }
  std::map<std::pair<int, int>, int> ids;
  class_of_.resize(side, side);
  for (int c1 = 0; c1 < side; ++c1) {
    for (int c2 = 0; c2 < side; ++c2) {
      const auto key = std::minmax(coord_key_[c1], coord_key_[c2]);
      auto [it, inserted] = ids.try_emplace(key, static_cast<int>(class_norms_.size()));
      if (inserted) {
        class_norms_.push_back(std::hypot(kPi * key.first / grid_.lambda,
                                          kPi * key.second / grid_.lambda));
      }
      class_of_(c1, c2) = it->second;
    }
  }
  const auto nc = static_cast<Eigen::Index>(class_norms_.size());
  table_.resize(radii_.size(), nc);
  for (Eigen::Index c = 0; c < nc; ++c) {
    for (Eigen::Index r = 0; r < radii_.size(); ++r) {
      table_(r, c) = bessel_j0(radii_(r) * class_norms_[c]);
    }
  }
}

Eigen::VectorXd RadialKernel::apply(const Eigen::MatrixXd& values) const {
  if (values.rows() != grid_.side() || values.cols() != grid_.side()) {
    throw InvalidArgument("RadialKernel::apply: values do not match the frequency grid");
  }
  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(class_norms_.size()));
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) pooled(class_of_(i, j)) += values(i, j);
  }
  return table_ * pooled;
}

Eigen::VectorXd c0_hat(const TaperedDftField& dft, const RadialKernel& kernel) {
  const double n = static_cast<double>(dft.n());
  Eigen::MatrixXd p = dft.sums().cwiseAbs2();
  p.array() -= dft.diag_weight();
  return kernel.apply(p) / (n * n * dft.h0());
}

Eigen::VectorXd c0_hat(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
                       const Eigen::VectorXd& r_values) {
  const RadialKernel kernel(grid, r_values);
  return c0_hat(weighted_dft(sample, taper, grid), kernel);
}

D2Estimate d2_efficient(const Eigen::VectorXd& c0_values, const TestConfig& config) {
  if (c0_values.size() != config.a_r) {
    throw InvalidArgument("d2_efficient: expected " + std::to_string(config.a_r) +
                          " radial values, got " + std::to_string(c0_values.size()));
  }
  int stop = config.a_r;
  if (config.truncate_c0) {
    for (int r = 0; r < config.a_r; ++r) {
      if (c0_values(r) < 0.0) {
        stop = r;
        break;
      }
    }
  }
  D2Estimate out;
  out.truncation_index = stop;
  out.empty = stop == 0;
  if (out.empty) return out;
  const Eigen::VectorXd rho = config.radial_arguments();
  Eigen::VectorXd terms = rho.head(stop).cwiseProduct(c0_values.head(stop).cwiseAbs2());
  const double tp2 = kTwoPi * kTwoPi;
  out.value = tp2 * tp2 / config.lambda_r *
              detail::pairwise_sum<double>({terms.data(), static_cast<std::size_t>(stop)});
  return out;
}

D2Estimate d2_efficient(const SpatialSample& sample, const TestConfig& config) {
  config.validate();
  const RadialKernel kernel(config.grid(), config.radial_arguments());
  return d2_efficient(c0_hat(weighted_dft(sample, config.taper, config.grid()), kernel), config);
}

double f4_hat(const TaperedDftField& dft) {
  const Eigen::MatrixXd i4 = density_periodogram(dft).array().square().square();
  const double step = kTwoPi / dft.grid().lambda;
  return step * step / 24.0 * matrix_sum(i4);
}

double f4_hat(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid) {
  return f4_hat(weighted_dft(sample, taper, grid));
}

namespace {

TauEstimate tau_from_brackets(const TaperedDftField& dft, const Eigen::MatrixXd& brackets) {
  const double n = static_cast<double>(dft.n());
  const double n4 = n * n * n * n;
  const Eigen::MatrixXd scaled = (brackets / n4).array().square();
  const double lambda = dft.grid().lambda;
  const double h0 = dft.h0();
  const double h0_4 = h0 * h0 * h0 * h0;
  const double tp2 = kTwoPi * kTwoPi;
  const double l3 = lambda * lambda * lambda;
  const double pref = tp2 * tp2 * l3 * l3 / 12.0 * (h4_weight_sum(dft.taper(), dft.grid().a) / (h0_4 * h0_4));
  TauEstimate out;
  out.unclamped = pref * matrix_sum(scaled);
  out.clamped = !(out.unclamped > 0.0);
  out.value = out.clamped ? 0.0 : out.unclamped;
  return out;
}

}  // namespace

TauEstimate tau_h0_biascorrected(const TaperedDftField& dft) {
  if (dft.n() < 4) throw InvalidArgument("tau_h0_biascorrected: need at least 4 points");
  return tau_from_brackets(dft, restricted_fourth_order_sums(dft));
}

TauEstimate tau_h0_biascorrected(const SpatialSample& sample, const Taper& taper,
                                 const FrequencyGrid& grid) {
  return tau_h0_biascorrected(weighted_dft(sample, taper, grid));
}

double tau_h0_plain(const TaperedDftField& dft) {
  const double h0 = dft.h0();
  const double h0_4 = h0 * h0 * h0 * h0;
  return 2.0 * kTwoPi * kTwoPi * f4_hat(dft) * h4_weight_sum(dft.taper(), dft.grid().a) / h0_4;
}

IsotropyTester::IsotropyTester(TestConfig config) : config_(std::move(config)) {
  config_.validate();
  require_smooth(config_.taper);
  kernel_ = std::make_shared<const RadialKernel>(config_.grid(), config_.radial_arguments());
  critical_ = normal_quantile(1.0 - config_.alpha_level);
}

TestResult IsotropyTester::evaluate(const SpatialSample& sample) const {
  if (sample.size() < 4) throw InvalidArgument("isotropy_test: need at least 4 points");
  const TaperedDftField dft = weighted_dft(sample, config_.taper, config_.grid());
  const Eigen::MatrixXd brackets = restricted_fourth_order_sums(dft);

  TestResult out;
  const double n2 = static_cast<double>(dft.n()) * static_cast<double>(dft.n());
  const double lambda = config_.lambda;
  out.d1_hat = (kTwoPi * lambda) * (kTwoPi * lambda) / (2.0 * n2 * n2 * dft.h0() * dft.h0()) *
               matrix_sum(brackets);

  const D2Estimate d2 = d2_efficient(c0_hat(dft, *kernel_), config_);
  out.d2_hat = d2.value;
  out.radial_terms = d2.truncation_index;
  if (config_.truncate_c0) out.c0_truncation_index = d2.truncation_index;
  out.m_hat = out.d1_hat - out.d2_hat;

  out.f4_hat = f4_hat(dft);
  out.tau_h0_sq_plain = tau_h0_plain(dft);
  const TauEstimate tau = tau_from_brackets(dft, brackets);
  out.tau_h0_sq_hat = tau.value;
  out.tau_h0_sq_unclamped = tau.unclamped;
  out.critical = critical_;

  if (tau.clamped) {
    out.degenerate = true;
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.reject = false;
    return out;
  }
  out.statistic = lambda * out.m_hat / std::sqrt(tau.value);
  out.p_value = normal_sf(out.statistic);
  out.reject = exceeds_critical(out.statistic, out.critical);
  return out;
}

TestResult isotropy_test(const SpatialSample& sample, const TestConfig& config) {
  const IsotropyTester tester(config);
  TestResult out = tester.evaluate(sample);
  if (out.degenerate) {
    throw DegenerateVariance("isotropy_test: variance estimate is not positive (" +
                                 std::to_string(out.tau_h0_sq_unclamped) + "); test undecidable",
                             out.tau_h0_sq_unclamped);
  }
  return out;
}

}  // namespace aniso
