#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "aniso/covariance.hpp"
#include "aniso/rng.hpp"

namespace aniso {

using Locations = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Irregularly placed observations Z(s_j) on the square [-lambda/2, lambda/2]^2.
class SpatialSample {
 public:
  /// Validates that every coordinate lies in the square and that there is one
  /// value per location. Throws InvalidArgument otherwise.
  SpatialSample(double lambda, Locations locations, Eigen::VectorXd values);

  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const Locations& locations() const noexcept { return locations_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  /// Same locations, values multiplied by `factor`.
  SpatialSample scaled(double factor) const;

 private:
  double lambda_;
  Locations locations_;
  Eigen::VectorXd values_;
};

/// n i.i.d. points, each coordinate uniform on [-lambda/2, lambda/2].
Locations sample_locations(std::size_t n, double lambda, const Seed& seed);

/// Dense Sigma_ij = c(s_i - s_j), both triangles filled.
Eigen::MatrixXd covariance_matrix(const CovarianceModel& model, const Locations& locations);

struct SimulatedField {
  SpatialSample sample;
  double jitter;  // epsilon actually added to the diagonal
};

/// Jitter ladder tried in order, as multiples of c(0).
inline constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};

/// Draws Z ~ N(0, Sigma + eps I) by dense Cholesky, escalating eps along
/// kJitterLadder. Throws NumericalFailure when every rung fails.
SimulatedField simulate_field_with_diagnostics(const CovarianceModel& model, double lambda,
                                               const Locations& locations, const Seed& seed);

SpatialSample simulate_field(const CovarianceModel& model, double lambda,
                             const Locations& locations, const Seed& seed);

}  // namespace aniso
