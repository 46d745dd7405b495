#include "aniso/l_functions.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

double envelope_head(int s) {
  return s == 0 ? 1.0 : std::pow(s / std::numbers::e, s);
}

double falling_log_moment(int k, double m) {
  // \int_m^inf log^k(2x) / x^2 dx = (1/m) sum_j k!/(k-j)! log^{k-j}(2m)
  double sum = 0.0;
  double coef = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += coef * std::pow(std::log(2.0 * m), k - j);
    coef *= (k - j);
  }
  return sum / m;
}

void require_order(int s, const char* what) {
  if (s < 0) throw InvalidArgument(std::string(what) + ": order must be nonnegative");
}

}  // namespace

double l_function(const LFunctionParams& params, double u) {
  require_order(params.s, "l_function");
  if (!(params.lambda > 0.0)) throw InvalidArgument("l_function: lambda must be positive");
  const double au = std::abs(u);
  if (au <= std::exp(static_cast<double>(params.s)) / params.lambda) {
    return envelope_head(params.s) * params.lambda;
  }
  return std::pow(std::log(params.lambda * au), params.s) / au;
}

double ell_function(int s, double u) {
  require_order(s, "ell_function");
  const double au = std::abs(u);
  if (au <= std::exp(static_cast<double>(s))) return envelope_head(s);
  return std::pow(std::log(au), s) / au;
}

BoundRatios verify_l_convolution(int p, int q, double lambda, const std::vector<double>& v_grid) {
  require_order(p, "verify_l_convolution");
  require_order(q, "verify_l_convolution");
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const LFunctionParams lp{p, lambda}, lq{q, lambda}, lr{p + q + 1, lambda};
  const double kp = std::exp(static_cast<double>(p)) / lambda;
  const double kq = std::exp(static_cast<double>(q)) / lambda;

  BoundRatios out;
  for (double v : v_grid) {
    if (!std::isfinite(v)) throw InvalidArgument("verify_l_convolution: non-finite v");
    auto integrand = [&](double u) { return l_function(lp, u) * l_function(lq, v - u); };
    std::vector<double> cuts{-kp, kp, v - kq, v + kq, 0.0, v, 0.5 * v};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double lhs = 0.0, err = 0.0;
    lhs += GK::integrate(integrand, -kInf, cuts.front(), 15, 1e-10, &err);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      lhs += GK::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-10, &err);
    }
    lhs += GK::integrate(integrand, cuts.back(), kInf, 15, 1e-10, &err);
    if (!std::isfinite(lhs)) {
      throw QuadratureFailure("verify_l_convolution: non-finite integral", lhs, lhs);
    }
    const double ratio = lhs / l_function(lr, v);
    out.ratios.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

BoundRatios verify_l_sum(int p, int q, const std::vector<long>& r_grid, long m_max) {
  require_order(p, "verify_l_sum");
  require_order(q, "verify_l_sum");
  BoundRatios out;
  for (long r_signed : r_grid) {
    // l is even, so the sum at -r equals the sum at r term by term after m -> -m.
    const long r = std::abs(r_signed);
    if (m_max < 2 * r + 2) throw InvalidArgument("verify_l_sum: m_max must exceed 2|r| + 2");
    long double sum = 0.0L;
    for (long m = -m_max; m <= m_max; ++m) {
      sum += static_cast<long double>(ell_function(p, static_cast<double>(m))) *
             ell_function(q, static_cast<double>(m + r));
    }
    // For |m| > m_max >= 2 r: |m + r| >= |m| / 2, so each term is at most
    // 2 log^{p+q}(2|m|) / m^2; both tails together are bounded by the integral from m_max - 1.
    const double tail = 2.0 * 2.0 * falling_log_moment(p + q, static_cast<double>(m_max - 1));
    const double lhs = static_cast<double>(sum) + tail;
    const double ratio = lhs / ell_function(p + q + 1, static_cast<double>(r));
    out.ratios.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

}  // namespace aniso
