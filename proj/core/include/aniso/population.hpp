#pragma once

#include <Eigen/Core>

#include "aniso/covariance.hpp"
#include "aniso/quadrature.hpp"
#include "aniso/taper.hpp"

namespace aniso {

/// D1 = \int f^2 over R^2 (polar Gauss-Legendre x periodic trapezoid).
/// Throws QuadratureFailure when doubling the resolution moves the value
/// by more than quad.tol (relative).
double population_d1(const CovarianceModel& model, const QuadratureSpec& quad = {});

/// D2 = (1/2 pi) \int_0^inf (\int f(w) J0(r |w|) dw)^2 r dr.
double population_d2(const CovarianceModel& model, const QuadratureSpec& quad = {});

/// \int f^4 over R^2.
double population_f4(const CovarianceModel& model, const QuadratureSpec& quad = {});

struct M2Value {
  double value = 0.0;     // max(D1 - D2, 0)
  double residual = 0.0;  // D1 - D2 before clamping
  double d1 = 0.0;
  double d2 = 0.0;
};

M2Value population_m2(const CovarianceModel& model, const QuadratureSpec& quad = {});

struct TauLimits {
  double tau1_sq = 0.0;
  double tau2_sq = 0.0;
  double kappa12 = 0.0;
  double tau_sq = 0.0;     // tau1^2 + tau2^2 - 2 kappa
  double tau_h0_sq = 0.0;  // isotropic closed form 2 (2 pi)^2 S4 \int f^4
  double f4 = 0.0;
  double s2 = 0.0;         // sum_{|m_i| <= m_cutoff} H(m)^2 / H(0)^2
  double s4 = 0.0;         // sum_{|m_i| <= m_cutoff} H(m)^4 / H(0)^4
};

/// Limiting variances of the D1 and D2 estimators and their covariance,
/// with the taper sums over m in Z^2 truncated at |m_i| <= m_cutoff.
TauLimits population_tau_limits(const CovarianceModel& model, const Taper& taper, int m_cutoff,
                                const QuadratureSpec& quad = {});

/// sum_{|m_i| <= m_cutoff} (H(m) / H(0))^p over m in Z^2.
double taper_weight_sum(const Taper& taper, int m_cutoff, int p);

/// |(1/2 pi) \int_0^{2 pi} exp(i r (cos t, sin t).x) dt - J0(r |x|)| with a
/// `points`-node periodic trapezoid.
double j0_angular_identity_check(double r, const Vec2& x, int points = 2048);

struct EnvelopeGrid {
  double radius_max = 1000.0;
  int radial = 400;   // log-spaced shells in [radius_max * 1e-4, radius_max]
  int angular = 64;
};

struct EnvelopeCheck {
  bool ok = false;
  double constant = 0.0;  // fitted C = sup f / shape over the grid
  double inner = 0.0;     // sup over |w| <= radius_max / 10
  double outer = 0.0;     // sup over the outer shell
};

/// Fits C in f(w) <= C min(1, |w|^{-delta}) on the grid. ok when the outer
/// shell needs no larger constant than the inner region (up to 10% slack),
/// i.e. the envelope shape is not eventually violated.
EnvelopeCheck beta_envelope_check(const CovarianceModel& model, double delta,
                                  const EnvelopeGrid& grid = {});

}  // namespace aniso
