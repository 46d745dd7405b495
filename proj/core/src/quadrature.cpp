#include "aniso/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {

Rule composite_gauss_legendre(double lo, double hi, int panels) {
  if (panels < 1 || !(hi > lo)) throw InvalidArgument("composite_gauss_legendre: bad interval");
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& x = GL::abscissa();  // positive half-abscissae; N even, so no node at 0
  const auto& w = GL::weights();
  Rule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * 20);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.nodes.push_back(mid - half * x[i]);
      rule.weights.push_back(half * w[i]);
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  }
  return rule;
}

Rule periodic_trapezoid(int points) {
  if (points < 1) throw InvalidArgument("periodic_trapezoid: need at least one point");
  Rule rule;
  const double h = 2.0 * std::numbers::pi / points;
  for (int i = 0; i < points; ++i) {
    rule.nodes.push_back(i * h);
    rule.weights.push_back(h);
  }
  return rule;
}

}  // namespace aniso
