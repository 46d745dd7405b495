#pragma once

namespace aniso {

/// Bessel function of the first kind, order zero. Even in x.
///
/// |x| <= 8: Taylor series in (x/2)^2, summed until terms drop below 1e-17.
/// |x| > 8: Hankel form sqrt(2/(pi x)) (P0 cos(x - pi/4) - Q0 sin(x - pi/4))
/// with P0, Q0 as rational functions of (8/x)^2 (Hart, Computer
/// Approximations, 1968). Absolute error stays below 1e-13 on [0, 50].
double bessel_j0(double x) noexcept;

}  // namespace aniso
