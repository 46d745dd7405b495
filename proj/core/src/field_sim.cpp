#include "aniso/field_sim.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

SpatialSample::SpatialSample(double lambda, Locations locations, Eigen::VectorXd values)
    : lambda_(lambda), locations_(std::move(locations)), values_(std::move(values)) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw InvalidArgument("SpatialSample: lambda must be positive");
  }
  if (locations_.rows() != values_.size()) {
    throw InvalidArgument("SpatialSample: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(locations_.rows()) + " locations");
  }
  const double half = lambda_ / 2.0;
  for (Eigen::Index j = 0; j < locations_.rows(); ++j) {
    for (int c = 0; c < 2; ++c) {
      const double v = locations_(j, c);
      if (!std::isfinite(v) || v < -half || v > half) {
        std::ostringstream os;
        os << "SpatialSample: location " << j << " coordinate " << v << " outside [-" << half
           << ", " << half << "]";
        throw InvalidArgument(os.str());
      }
    }
    if (!std::isfinite(values_(j))) {
      throw InvalidArgument("SpatialSample: non-finite value at row " + std::to_string(j));
    }
  }
}

SpatialSample SpatialSample::scaled(double factor) const {
  return SpatialSample(lambda_, locations_, values_ * factor);
}

Locations sample_locations(std::size_t n, double lambda, const Seed& seed) {
  if (n == 0) throw InvalidArgument("sample_locations: n must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("sample_locations: lambda must be positive");
  }
  Engine eng = make_engine(seed);
  std::uniform_real_distribution<double> unif(-lambda / 2.0, lambda / 2.0);
  Locations out(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    out(j, 0) = unif(eng);
    out(j, 1) = unif(eng);
  }
  return out;
}

namespace {

// Fills the lower triangle (diagonal included) of `sigma`.
void fill_lower(const CovarianceModel& model, const Locations& locs, Eigen::MatrixXd& sigma,
                double diag_add) {
  const Eigen::Index n = locs.rows();
  if (const auto* g = std::get_if<GaussianAniso>(&model.kind())) {
    // exp(-4 |A (s_i - s_j)|^2) = exp(-4 |A s_i - A s_j|^2)
    const double c = std::sqrt(2.0) / 2.0;
    Locations u(n, 2);
    for (Eigen::Index j = 0; j < n; ++j) {
      u(j, 0) = c * locs(j, 0) + c * locs(j, 1);
      u(j, 1) = (-c * locs(j, 0) + c * locs(j, 1)) / g->r;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double uj0 = u(j, 0), uj1 = u(j, 1);
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double d0 = u(i, 0) - uj0, d1 = u(i, 1) - uj1;
        sigma(i, j) = std::exp(-4.0 * (d0 * d0 + d1 * d1));
      }
      sigma(j, j) = 1.0 + diag_add;
    }
    return;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      sigma(i, j) = covariance_eval(model, Vec2(locs(i, 0) - locs(j, 0), locs(i, 1) - locs(j, 1)));
    }
    sigma(j, j) = model.variance() + diag_add;
  }
}

}  // namespace

Eigen::MatrixXd covariance_matrix(const CovarianceModel& model, const Locations& locations) {
  const Eigen::Index n = locations.rows();
  Eigen::MatrixXd sigma(n, n);
  fill_lower(model, locations, sigma, 0.0);
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  return sigma;
}

SimulatedField simulate_field_with_diagnostics(const CovarianceModel& model, double lambda,
                                               const Locations& locations, const Seed& seed) {
  const Eigen::Index n = locations.rows();
  if (n == 0) throw InvalidArgument("simulate_field: no locations");

  Engine eng = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index j = 0; j < n; ++j) z(j) = normal(eng);

  Eigen::MatrixXd sigma(n, n);
  for (double rung : kJitterLadder) {
    const double eps = rung * model.variance();
    fill_lower(model, locations, sigma, eps);
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(sigma);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXd values = llt.matrixL() * z;
    return SimulatedField{SpatialSample(lambda, locations, std::move(values)), eps};
  }
  std::ostringstream os;
  os << "simulate_field: Cholesky failed for " << model.describe() << " with n=" << n
     << " at every jitter level up to " << kJitterLadder[std::size(kJitterLadder) - 1]
     << " * c(0)";
  throw NumericalFailure(os.str());
}

SpatialSample simulate_field(const CovarianceModel& model, double lambda,
                             const Locations& locations, const Seed& seed) {
  return simulate_field_with_diagnostics(model, lambda, locations, seed).sample;
}

}  // namespace aniso
