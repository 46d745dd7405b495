#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

namespace aniso {

using Vec2 = Eigen::Vector2d;

/// Gaussian kernel c(h) = exp(-4 |A_r h|^2) with
/// A_r = diag(1, 1/r) * [[cos pi/4, sin pi/4], [-sin pi/4, cos pi/4]].
/// r = 1 is the isotropic kernel exp(-4 |h|^2).
struct GaussianAniso {
  double r = 1.0;
};

/// Matern kernel with unit marginal variance,
/// c(h) = 2^{1-nu}/Gamma(nu) * x^nu K_nu(x), x = sqrt(2 nu) |h| / ell.
struct Matern {
  double nu = 3.0;
  double ell = 1.0;
};

class CovarianceModel {
 public:
  using Kind = std::variant<GaussianAniso, Matern>;

  static CovarianceModel gaussian_aniso(double r);
  static CovarianceModel matern(double nu, double ell);

  const Kind& kind() const noexcept { return kind_; }
  bool is_isotropic() const noexcept;
  std::string describe() const;

  /// c(0); both families are normalised to 1.
  double variance() const noexcept { return 1.0; }

  /// Lag length beyond which |c(h)| < eps * c(0) in every direction.
  double decay_radius(double eps) const;

  /// Frequency radius beyond which f(w) < eps * f(0) in every direction.
  double spectral_cutoff(double eps) const;

 private:
  explicit CovarianceModel(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// c(h). Throws InvalidArgument for non-finite lags.
double covariance_eval(const CovarianceModel& model, const Vec2& h);

/// f(w) = \int c(h) exp(-i w.h) dh, inverse transform carrying (2 pi)^{-2}.
double spectral_density(const CovarianceModel& model, const Vec2& omega);

}  // namespace aniso
