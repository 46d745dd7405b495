#include "aniso/taper.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// lambda * sin(x lambda / 2) / (x lambda / 2) with the removable singularity handled.
double scaled_sinc(double lambda, double x) {
  const double t = 0.5 * lambda * x;
  if (std::abs(t) < 1e-6) return lambda * (1.0 - t * t / 6.0);
  return lambda * std::sin(t) / t;
}

}  // namespace

Taper Taper::cosine(int alpha) {
  if (alpha < 0) throw InvalidArgument("cosine taper: alpha must be >= 0");
  return alpha == 0 ? rectangular() : Taper(Kind::CosinePower, alpha);
}

double Taper::eval1(double s) const noexcept {
  if (std::abs(s) > 0.5) return 0.0;
  if (kind_ == Kind::Rectangular) return 1.0;
  const double c = std::cos(kPi * s);
  return std::pow(std::max(c, 0.0), alpha_);
}

double taper_eval(const Taper& taper, const Eigen::Vector2d& s) {
  return taper.eval1(s.x()) * taper.eval1(s.y());
}

double h1_coefficient(const Taper& taper, int m) {
  // cos^{2a}(pi s) = 4^{-a} sum_j C(2a, j) exp(2 pi i (a - j) s), and each
  // exponential integrates to the Kronecker delta over the unit interval.
  const int a = taper.alpha();
  if (std::abs(m) > a) return 0.0;
  return binomial(2 * a, a - std::abs(m)) / std::pow(4.0, a);
}

double h_coefficient(const Taper& taper, const std::array<int, 2>& m) {
  return h1_coefficient(taper, m[0]) * h1_coefficient(taper, m[1]);
}

double h1_power_sum(const Taper& taper, int lo, int hi, int p) {
  double acc = 0.0;
  const int a = taper.alpha();
  for (int m = std::max(lo, -a); m <= std::min(hi, a); ++m) {
    acc += std::pow(h1_coefficient(taper, m), p);
  }
  return acc;
}

double frequency_window1(const Taper& taper, double lambda, double u) {
  // cos^a(pi s / lambda) = 2^{-a} sum_j C(a, j) exp(i pi (a - 2j) s / lambda),
  // so B is a weighted sum of shifted sinc windows.
  const int a = taper.alpha();
  double acc = 0.0;
  for (int j = 0; j <= a; ++j) {
    const double shift = kPi * (a - 2 * j) / lambda;
    acc += binomial(a, j) * scaled_sinc(lambda, shift - u);
  }
  return acc / std::pow(2.0, a);
}

double frequency_window(const Taper& taper, double lambda, const Eigen::Vector2d& u) {
  if (!(lambda > 0.0)) throw InvalidArgument("frequency_window: lambda must be positive");
  return frequency_window1(taper, lambda, u.x()) * frequency_window1(taper, lambda, u.y());
}

}  // namespace aniso
