#pragma once

#include <Eigen/Core>
#include <vector>

namespace aniso {

/// Index set k in {-a, ..., a-1}^2 with per-coordinate frequency
/// 2 pi k / lambda, plus pi / lambda when shifted (the midpoint grid).
struct FrequencyGrid {
  int a = 80;
  double lambda = 30.0;
  bool shifted = true;

  int side() const noexcept { return 2 * a; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(side()) * static_cast<std::size_t>(side());
  }

  /// Frequency for index k; exact negation symmetry omega(-k-1) = -omega(k)
  /// holds on the shifted grid.
  double coordinate(int k) const noexcept;

  /// Per-coordinate frequencies for k = -a .. a-1.
  Eigen::VectorXd coordinates() const;

  /// Throws InvalidArgument unless a >= 1 and lambda > 0.
  void validate() const;
};

/// All (2a)^2 frequency vectors, k_1-major (row-major) order.
std::vector<Eigen::Vector2d> grid_frequencies(const FrequencyGrid& grid);

}  // namespace aniso
