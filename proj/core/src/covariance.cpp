#include "aniso/covariance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Rotation by pi/4 used by the anisotropic Gaussian family.
Vec2 rotate_quarter(const Vec2& v) {
  const double c = std::numbers::sqrt2 / 2.0;
  return {c * v.x() + c * v.y(), -c * v.x() + c * v.y()};
}

double matern_corr(double nu, double x) {
  if (x == 0.0) return 1.0;
  // log-space prefactor keeps large nu finite
  const double log_pre = (1.0 - nu) * std::log(2.0) - std::lgamma(nu) + nu * std::log(x);
  if (x > 700.0) return 0.0;
  return std::exp(log_pre) * std::cyl_bessel_k(nu, x);
}

}  // namespace

CovarianceModel CovarianceModel::gaussian_aniso(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("gauss-aniso: r must be a positive finite number");
  }
  return CovarianceModel(GaussianAniso{r});
}

CovarianceModel CovarianceModel::matern(double nu, double ell) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("matern: nu must be positive");
  if (!(ell > 0.0) || !std::isfinite(ell)) throw InvalidArgument("matern: ell must be positive");
  return CovarianceModel(Matern{nu, ell});
}

bool CovarianceModel::is_isotropic() const noexcept {
  return std::visit(overloaded{[](const GaussianAniso& g) { return g.r == 1.0; },
                               [](const Matern&) { return true; }},
                    kind_);
}

std::string CovarianceModel::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const GaussianAniso& g) { os << "gauss-aniso(r=" << g.r << ")"; },
                        [&](const Matern& m) {
                          os << "matern(nu=" << m.nu << ", ell=" << m.ell << ")";
                        }},
             kind_);
  return os.str();
}

double CovarianceModel::decay_radius(double eps) const {
  return std::visit(
      overloaded{[&](const GaussianAniso& g) {
                   // slowest direction has exp(-4 |h|^2 / max(r,1/r)^2)
                   const double stretch = std::max(g.r, 1.0 / g.r);
                   return stretch * std::sqrt(-std::log(eps) / 4.0);
                 },
                 [&](const Matern& m) {
                   double lo = 0.0, hi = m.ell;
                   const double s = std::sqrt(2.0 * m.nu) / m.ell;
                   while (matern_corr(m.nu, s * hi) > eps) hi *= 2.0;
                   for (int i = 0; i < 200; ++i) {
                     const double mid = 0.5 * (lo + hi);
                     (matern_corr(m.nu, s * mid) > eps ? lo : hi) = mid;
                   }
                   return hi;
                 }},
      kind_);
}

double CovarianceModel::spectral_cutoff(double eps) const {
  return std::visit(overloaded{[&](const GaussianAniso& g) {
                                 // f decays like exp(-|D R w|^2/16) with |D R w| >= min(1,r)|w|
                                 const double shrink = std::min(g.r, 1.0);
                                 return 4.0 * std::sqrt(-std::log(eps)) / shrink;
                               },
                               [&](const Matern& m) {
                                 // (1 + |w|^2/kappa^2)^{-(nu+1)} < eps
                                 const double kappa2 = 2.0 * m.nu / (m.ell * m.ell);
                                 const double t = std::pow(eps, -1.0 / (m.nu + 1.0)) - 1.0;
                                 return std::sqrt(kappa2 * t);
                               }},
                    kind_);
}

double covariance_eval(const CovarianceModel& model, const Vec2& h) {
  if (!h.allFinite()) throw InvalidArgument("covariance_eval: non-finite lag");
  return std::visit(overloaded{[&](const GaussianAniso& g) {
                                 Vec2 u = rotate_quarter(h);
                                 u.y() /= g.r;
                                 return std::exp(-4.0 * u.squaredNorm());
                               },
                               [&](const Matern& m) {
                                 const double x = std::sqrt(2.0 * m.nu) * h.norm() / m.ell;
                                 return matern_corr(m.nu, x);
                               }},
                    model.kind());
}

double spectral_density(const CovarianceModel& model, const Vec2& omega) {
  return std::visit(
      overloaded{[&](const GaussianAniso& g) {
                   Vec2 u = rotate_quarter(omega);
                   u.y() *= g.r;
                   return kPi * g.r / 4.0 * std::exp(-u.squaredNorm() / 16.0);
                 },
                 [&](const Matern& m) {
                   // d = 2: 2^d pi^{d/2} Gamma(nu + d/2) (2 nu)^nu / (Gamma(nu) ell^{2 nu})
                   //        * (2 nu / ell^2 + |w|^2)^{-(nu + d/2)}
                   const double kappa2 = 2.0 * m.nu / (m.ell * m.ell);
                   const double log_c = std::log(4.0 * kPi) + std::lgamma(m.nu + 1.0) -
                                        std::lgamma(m.nu) + m.nu * std::log(2.0 * m.nu) -
                                        2.0 * m.nu * std::log(m.ell);
                   return std::exp(log_c - (m.nu + 1.0) * std::log(kappa2 + omega.squaredNorm()));
                 }},
      model.kind());
}

}  // namespace aniso
