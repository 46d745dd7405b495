#pragma once

namespace aniso {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x), accurate for large x.
double normal_sf(double x) noexcept;

/// Phi^{-1}(p) for p in (0, 1): Acklam's rational approximation
/// (relative error < 1.2e-9) refined by one Halley step against erfc.
/// Throws InvalidArgument outside (0, 1).
double normal_quantile(double p);

}  // namespace aniso
