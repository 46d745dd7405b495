#pragma once

#include <vector>

namespace aniso {

/// Frequency-space quadrature settings for the population integrals.
/// cutoff <= 0 means "derive from the model's analytic tail".
struct QuadratureSpec {
  double cutoff = 0.0;
  int panels = 64;
  double tol = 1e-6;
};

/// Nodes and weights of a 1-D rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// `panels` equal sub-intervals of [lo, hi], 20-point Gauss-Legendre on each.
Rule composite_gauss_legendre(double lo, double hi, int panels);

/// Periodic trapezoid rule with `points` nodes on [0, 2 pi).
Rule periodic_trapezoid(int points);

}  // namespace aniso
