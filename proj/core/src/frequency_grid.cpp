#include "aniso/frequency_grid.hpp"

#include <cmath>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {

double FrequencyGrid::coordinate(int k) const noexcept {
  if (shifted) return std::numbers::pi * (2.0 * k + 1.0) / lambda;
  return 2.0 * std::numbers::pi * k / lambda;
}

Eigen::VectorXd FrequencyGrid::coordinates() const {
  Eigen::VectorXd out(side());
  for (int k = -a; k < a; ++k) out(k + a) = coordinate(k);
  return out;
}

void FrequencyGrid::validate() const {
  if (a < 1) throw InvalidArgument("FrequencyGrid: a must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("FrequencyGrid: lambda must be positive");
  }
}

std::vector<Eigen::Vector2d> grid_frequencies(const FrequencyGrid& grid) {
  grid.validate();
  const Eigen::VectorXd c = grid.coordinates();
  std::vector<Eigen::Vector2d> out;
  out.reserve(grid.size());
  for (int i = 0; i < grid.side(); ++i) {
    for (int j = 0; j < grid.side(); ++j) out.emplace_back(c(i), c(j));
  }
  return out;
}

}  // namespace aniso
