#pragma once

#include <vector>

namespace aniso {

struct LFunctionParams {
  int s = 0;
  double lambda = 1.0;
};

/// L(u) = (s/e)^s lambda for |u| <= e^s / lambda (0^0 = 1), else log^s(lambda |u|) / |u|.
double l_function(const LFunctionParams& params, double u);

/// l(u) = L(u / lambda) / lambda; independent of lambda.
double ell_function(int s, double u);

struct BoundRatios {
  std::vector<double> ratios;  // LHS / RHS per grid point
  double max_ratio = 0.0;
};

/// \int L^{(p)}(u) L^{(q)}(v - u) du / L^{(p+q+1)}(v) for each v, by
/// adaptive Gauss-Kronrod split at the kinks of both factors.
BoundRatios verify_l_convolution(int p, int q, double lambda, const std::vector<double>& v_grid);

/// sum_m l^{(p)}(m) l^{(q)}(m + r) / l^{(p+q+1)}(r) for each r, summing
/// |m| <= m_max exactly and bounding the remainder analytically.
BoundRatios verify_l_sum(int p, int q, const std::vector<long>& r_grid, long m_max = 1'000'000);

}  // namespace aniso
