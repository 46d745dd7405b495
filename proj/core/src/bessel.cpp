#include "aniso/bessel.hpp"

#include <cmath>
#include <numbers>

namespace aniso {

namespace {

double series(double x) noexcept {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return sum;
}

template <std::size_t N>
double ratio(const double (&p)[N], const double (&q)[N], double z) noexcept {
  double num = p[N - 1], den = q[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    num = num * z + p[i];
    den = den * z + q[i];
  }
  return num / den;
}

// Coefficients in ascending powers of (8/x)^2.
constexpr double kPC[] = {2.2779090197304684302e+04, 4.1345386639580765797e+04,
                          2.1170523380864944322e+04, 3.4806486443249270347e+03,
                          1.5376201909008354296e+02, 8.8961548424210455236e-01};
constexpr double kQC[] = {2.2779090197304684318e+04, 4.1370412495510416640e+04,
                          2.1215350561880115730e+04, 3.5028735138235608207e+03,
                          1.5711159858080893649e+02, 1.0};
constexpr double kPS[] = {-8.9226600200800094098e+01, -1.8591953644342993800e+02,
                          -1.1183429920482737611e+02, -2.2300261666214198472e+01,
                          -1.2441026745835638459e+00, -8.8033303048680751817e-03};
constexpr double kQS[] = {5.7105024128512061905e+03, 1.1951131543434613647e+04,
                          7.2642780169211018836e+03, 1.4887231232283756582e+03,
                          9.0593769594993125859e+01, 1.0};

}  // namespace

double bessel_j0(double x) noexcept {
  x = std::abs(x);
  if (x <= 8.0) return series(x);
  const double y = 8.0 / x;
  const double z = y * y;
  const double p0 = ratio(kPC, kQC, z);
  const double q0 = y * ratio(kPS, kQS, z);
  // cos(x - pi/4) = (cos x + sin x)/sqrt2, sin(x - pi/4) = (sin x - cos x)/sqrt2
  const double sx = std::sin(x), cx = std::cos(x);
  return (p0 * (cx + sx) - q0 * (sx - cx)) / std::sqrt(std::numbers::pi * x);
}

}  // namespace aniso
