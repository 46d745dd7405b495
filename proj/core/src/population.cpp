#include "aniso/population.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "aniso/bessel.hpp"
#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpectralEps = 1e-10;
constexpr double kLagEps = 1e-12;
constexpr int kAngularPerPanel = 16;

// Angular integrals F_p(rho) = \int_0^{2 pi} f(rho cos t, rho sin t)^p dt,
// p = 1..4, on the radial Gauss-Legendre nodes.
struct PolarMoments {
  Rule radial;
  Eigen::MatrixXd moments;  // radial nodes x 4
};

PolarMoments polar_moments(const CovarianceModel& model, double cutoff, int panels) {
  PolarMoments out;
  out.radial = composite_gauss_legendre(0.0, cutoff, panels);
  const Rule ang = periodic_trapezoid(kAngularPerPanel * panels);
  std::vector<double> ct(ang.size()), st(ang.size());
  for (std::size_t a = 0; a < ang.size(); ++a) {
    ct[a] = std::cos(ang.nodes[a]);
    st[a] = std::sin(ang.nodes[a]);
  }
  const auto nr = static_cast<Eigen::Index>(out.radial.size());
  out.moments.setZero(nr, 4);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const double rho = out.radial.nodes[i];
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (std::size_t a = 0; a < ang.size(); ++a) {
      const double f = spectral_density(model, Vec2(rho * ct[a], rho * st[a]));
      const double w = ang.weights[a];
      s1 += w * f;
      s2 += w * f * f;
      s3 += w * f * f * f;
      s4 += w * f * f * f * f;
    }
    out.moments.row(i) << s1, s2, s3, s4;
  }
  return out;
}

double spectral_cutoff_of(const CovarianceModel& model, const QuadratureSpec& quad) {
  return quad.cutoff > 0.0 ? quad.cutoff : model.spectral_cutoff(kSpectralEps);
}

// \int_0^R F_p(rho) rho d rho.
double radial_integral(const PolarMoments& pm, int p) {
  double s = 0.0;
  for (std::size_t i = 0; i < pm.radial.size(); ++i) {
    s += pm.radial.weights[i] * pm.radial.nodes[i] * pm.moments(static_cast<Eigen::Index>(i), p - 1);
  }
  return s;
}

// Hankel-type transform G(r) = \int_0^R J0(r rho) rho F(rho) d rho at the nodes of `outer`.
Eigen::VectorXd hankel(const Rule& inner, const Eigen::VectorXd& values, const Rule& outer) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(outer.size()));
  for (std::size_t j = 0; j < outer.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      s += inner.weights[i] * inner.nodes[i] * values(static_cast<Eigen::Index>(i)) *
           bessel_j0(outer.nodes[j] * inner.nodes[i]);
    }
    out(static_cast<Eigen::Index>(j)) = s;
  }
  return out;
}

struct Integrals {
  double d1 = 0.0;
  double d2 = 0.0;
  double f4 = 0.0;
  double tau2_core = 0.0;   // \int F2 u^2 rho d rho
  double kappa_core = 0.0;  // \int r g h3 dr
};

Integrals integrals_at(const CovarianceModel& model, const QuadratureSpec& quad, int panels,
                       bool with_tau) {
  const double cutoff = spectral_cutoff_of(model, quad);
  const double lag_cutoff = model.decay_radius(kLagEps);
  const PolarMoments pm = polar_moments(model, cutoff, panels);
  const Rule outer = composite_gauss_legendre(0.0, lag_cutoff, panels);

  Integrals out;
  out.d1 = radial_integral(pm, 2);
  out.f4 = radial_integral(pm, 4);

  // g(r) = \int f(w) J0(r |w|) dw = (2 pi)^2 * angular mean of c at lag r.
  const Eigen::VectorXd g = hankel(pm.radial, pm.moments.col(0), outer);
  double d2 = 0.0;
  for (std::size_t j = 0; j < outer.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    d2 += outer.weights[j] * outer.nodes[j] * g(jj) * g(jj);
  }
  out.d2 = d2 / kTwoPi;
  if (!with_tau) return out;

  // u(rho) = \int g(r) J0(r rho) r dr on the radial frequency nodes.
  const Eigen::VectorXd u = hankel(outer, g, pm.radial);
  double t2 = 0.0;
  for (std::size_t i = 0; i < pm.radial.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    t2 += pm.radial.weights[i] * pm.radial.nodes[i] * pm.moments(ii, 1) * u(ii) * u(ii);
  }
  out.tau2_core = t2;

  const Eigen::VectorXd h3 = hankel(pm.radial, pm.moments.col(2), outer);
  double kc = 0.0;
  for (std::size_t j = 0; j < outer.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    kc += outer.weights[j] * outer.nodes[j] * g(jj) * h3(jj);
  }
  out.kappa_core = kc;
  return out;
}

void check_convergence(const char* what, double coarse, double fine, double tol) {
  const double scale = std::max(std::abs(fine), 1e-300);
  if (!(std::abs(fine - coarse) <= tol * scale)) {
    std::ostringstream os;
    os << what << ": quadrature did not self-converge (coarse " << coarse << ", fine " << fine
       << ", tol " << tol << ")";
    throw QuadratureFailure(os.str(), coarse, fine);
  }
}

void validate(const QuadratureSpec& quad) {
  if (quad.panels < 1) throw InvalidArgument("QuadratureSpec: panels must be positive");
  if (!(quad.tol > 0.0)) throw InvalidArgument("QuadratureSpec: tol must be positive");
  if (quad.cutoff < 0.0 || !std::isfinite(quad.cutoff)) {
    throw InvalidArgument("QuadratureSpec: cutoff must be finite and nonnegative");
  }
}

struct Converged {
  Integrals coarse;
  Integrals fine;
};

Converged converged(const CovarianceModel& model, const QuadratureSpec& quad, bool with_tau) {
  validate(quad);
  return {integrals_at(model, quad, quad.panels, with_tau),
          integrals_at(model, quad, 2 * quad.panels, with_tau)};
}

}  // namespace

double population_d1(const CovarianceModel& model, const QuadratureSpec& quad) {
  validate(quad);
  const double cutoff = spectral_cutoff_of(model, quad);
  const double coarse = radial_integral(polar_moments(model, cutoff, quad.panels), 2);
  const double fine = radial_integral(polar_moments(model, cutoff, 2 * quad.panels), 2);
  check_convergence("population_d1", coarse, fine, quad.tol);
  return fine;
}

double population_f4(const CovarianceModel& model, const QuadratureSpec& quad) {
  validate(quad);
  const double cutoff = spectral_cutoff_of(model, quad);
  const double coarse = radial_integral(polar_moments(model, cutoff, quad.panels), 4);
  const double fine = radial_integral(polar_moments(model, cutoff, 2 * quad.panels), 4);
  check_convergence("population_f4", coarse, fine, quad.tol);
  return fine;
}

double population_d2(const CovarianceModel& model, const QuadratureSpec& quad) {
  const Converged c = converged(model, quad, false);
  check_convergence("population_d2", c.coarse.d2, c.fine.d2, quad.tol);
  return c.fine.d2;
}

M2Value population_m2(const CovarianceModel& model, const QuadratureSpec& quad) {
  const Converged c = converged(model, quad, false);
  check_convergence("population_d1", c.coarse.d1, c.fine.d1, quad.tol);
  check_convergence("population_d2", c.coarse.d2, c.fine.d2, quad.tol);
  M2Value out;
  out.d1 = c.fine.d1;
  out.d2 = c.fine.d2;
  out.residual = out.d1 - out.d2;
  out.value = std::max(out.residual, 0.0);
  return out;
}

double taper_weight_sum(const Taper& taper, int m_cutoff, int p) {
  if (m_cutoff < 0) throw InvalidArgument("taper_weight_sum: m_cutoff must be nonnegative");
  const double h0 = h1_coefficient(taper, 0);
  const double s = h1_power_sum(taper, -m_cutoff, m_cutoff, p) / std::pow(h0, p);
  return s * s;
}

TauLimits population_tau_limits(const CovarianceModel& model, const Taper& taper, int m_cutoff,
                                const QuadratureSpec& quad) {
  const Converged c = converged(model, quad, true);
  check_convergence("population_f4", c.coarse.f4, c.fine.f4, quad.tol);
  check_convergence("tau2 integral", c.coarse.tau2_core, c.fine.tau2_core, quad.tol);
  check_convergence("kappa integral", c.coarse.kappa_core, c.fine.kappa_core, quad.tol);

  TauLimits out;
  out.s2 = taper_weight_sum(taper, m_cutoff, 2);
  out.s4 = taper_weight_sum(taper, m_cutoff, 4);
  out.f4 = c.fine.f4;
  const double tp2 = kTwoPi * kTwoPi;
  out.tau1_sq = tp2 * (8.0 * out.s2 + 2.0 * out.s4) * out.f4;
  out.tau2_sq = 8.0 * out.s2 * c.fine.tau2_core;
  out.kappa12 = 16.0 * kPi * out.s2 * c.fine.kappa_core;
  out.tau_sq = out.tau1_sq + out.tau2_sq - 2.0 * out.kappa12;
  out.tau_h0_sq = 2.0 * tp2 * out.s4 * out.f4;
  return out;
}

double j0_angular_identity_check(double r, const Vec2& x, int points) {
  const Rule rule = periodic_trapezoid(points);
  // equal weights, so average the exponentials; r = 0 then gives exactly 1
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    s += std::polar(1.0, r * (std::cos(t) * x.x() + std::sin(t) * x.y()));
  }
  return std::abs(s / static_cast<double>(rule.size()) - bessel_j0(r * x.norm()));
}

EnvelopeCheck beta_envelope_check(const CovarianceModel& model, double delta,
                                  const EnvelopeGrid& grid) {
  if (!(delta > 0.0)) throw InvalidArgument("beta_envelope_check: delta must be positive");
  if (grid.radial < 2 || grid.angular < 1 || !(grid.radius_max > 0.0)) {
    throw InvalidArgument("beta_envelope_check: bad grid");
  }
  EnvelopeCheck out;
  const double lo = std::log(grid.radius_max * 1e-4);
  const double hi = std::log(grid.radius_max);
  const double split = grid.radius_max / 10.0;
  out.inner = spectral_density(model, Vec2::Zero());
  for (int i = 0; i < grid.radial; ++i) {
    const double rho = std::exp(lo + (hi - lo) * i / (grid.radial - 1));
    const double shape = rho <= 1.0 ? 1.0 : std::pow(rho, -delta);
    for (int a = 0; a < grid.angular; ++a) {
      const double t = kTwoPi * a / grid.angular;
      const double ratio = spectral_density(model, Vec2(rho * std::cos(t), rho * std::sin(t))) / shape;
      double& slot = rho <= split ? out.inner : out.outer;
      slot = std::max(slot, ratio);
    }
  }
  out.constant = std::max(out.inner, out.outer);
  out.ok = std::isfinite(out.constant) && out.outer <= 1.1 * out.inner;
  return out;
}

}  // namespace aniso
