#include "aniso/reference/index_set_sums.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "aniso/errors.hpp"

namespace aniso::reference {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void guard(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("reference oracle size guard: " + what);
}

// Accumulation runs in long double so the oracle stays ahead of the
// estimators it checks when the sums cancel.
using LD = long double;
using CLD = std::complex<long double>;
using VectorLD = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using MatrixCLD = Eigen::Matrix<CLD, Eigen::Dynamic, Eigen::Dynamic>;

VectorLD tapered_values(const SpatialSample& sample, const Taper& taper) {
  const auto n = static_cast<Eigen::Index>(sample.size());
  VectorLD w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector2d s = sample.locations().row(j).transpose() / sample.lambda();
    w(j) = static_cast<LD>(taper_eval(taper, s)) * sample.values()(j);
  }
  return w;
}

// exp(i s_j . omega_k), points x frequencies (row-major frequency order).
MatrixCLD phases(const SpatialSample& sample, const FrequencyGrid& grid) {
  const auto freqs = grid_frequencies(grid);
  const auto n = static_cast<Eigen::Index>(sample.size());
  MatrixCLD p(n, static_cast<Eigen::Index>(freqs.size()));
  for (Eigen::Index j = 0; j < n; ++j) {
    const LD x = sample.locations()(j, 0), y = sample.locations()(j, 1);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      p(j, static_cast<Eigen::Index>(k)) = std::polar(1.0L, x * freqs[k].x() + y * freqs[k].y());
    }
  }
  return p;
}

bool selected(IndexSet set, const IndexSet* exclude, int a, int b, int c, int d) {
  return contains(set, a, b, c, d) && !(exclude && contains(*exclude, a, b, c, d));
}

double checked_real(CLD z, const char* what) {
  if (std::abs(z.imag()) > 1e-9L * (std::abs(z.real()) + 1e-300L) && std::abs(z.imag()) > 1e-13L) {
    throw NumericalFailure(std::string(what) + ": imaginary part does not cancel");
  }
  return static_cast<double>(z.real());
}

}  // namespace

bool contains(IndexSet set, int j1, int j2, int j3, int j4) noexcept {
  switch (set) {
    case IndexSet::AllDistinct:
      return j1 != j2 && j1 != j3 && j1 != j4 && j2 != j3 && j2 != j4 && j3 != j4;
    case IndexSet::Restricted:
      return j1 != j2 && j1 != j4 && j2 != j3 && j3 != j4;
    case IndexSet::PairDistinct:
      return j1 != j2 && j3 != j4;
  }
  return false;
}

namespace {

MatrixCLD quadruple_sums_ld(const SpatialSample& sample, const Taper& taper,
                            const FrequencyGrid& grid, IndexSet set, const IndexSet* exclude) {
  guard(sample.size() <= 12 && grid.a <= 3, "quadruple sums need n <= 12 and a <= 3");
  const int n = static_cast<int>(sample.size());
  const VectorLD w = tapered_values(sample, taper);
  const MatrixCLD p = phases(sample, grid);
  const int side = grid.side();
  MatrixCLD out(side, side);
  for (int k = 0; k < side * side; ++k) {
    CLD acc = 0.0L;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            if (!selected(set, exclude, a, b, c, d)) continue;
            acc += w(a) * w(b) * w(c) * w(d) * p(a, k) * std::conj(p(b, k)) * p(c, k) *
                   std::conj(p(d, k));
          }
    out(k / side, k % side) = acc;
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd quadruple_sums(const SpatialSample& sample, const Taper& taper,
                                const FrequencyGrid& grid, IndexSet set, const IndexSet* exclude) {
  return quadruple_sums_ld(sample, taper, grid, set, exclude)
      .unaryExpr([](const CLD& z) { return std::complex<double>(z); });
}

namespace {

double d1_prefactor(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid) {
  const double n = static_cast<double>(sample.size());
  const double h0 = h_coefficient(taper, {0, 0});
  return (kTwoPi * grid.lambda) * (kTwoPi * grid.lambda) / (2.0 * n * n * n * n * h0 * h0);
}

}  // namespace

double d1_over(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
               IndexSet set) {
  const CLD total = quadruple_sums_ld(sample, taper, grid, set, nullptr).sum();
  return d1_prefactor(sample, taper, grid) * checked_real(total, "d1_over");
}

double d1_complement(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
                     IndexSet set) {
  const IndexSet distinct = IndexSet::AllDistinct;
  const CLD total = quadruple_sums_ld(sample, taper, grid, set, &distinct).sum();
  return d1_prefactor(sample, taper, grid) * checked_real(total, "d1_complement");
}

double d1_naive(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid) {
  if (sample.size() < 4) throw InvalidArgument("d1_naive: need n >= 4 (no pairwise-different quadruples)");
  return d1_over(sample, taper, grid, IndexSet::AllDistinct);
}

double d2_over(const SpatialSample& sample, const TestConfig& config, IndexSet set,
               const IndexSet* exclude) {
  guard(sample.size() <= 10 && config.a <= 3 && config.a_r <= 4,
        "sextuple sums need n <= 10, a <= 3 and a_r <= 4");
  const FrequencyGrid grid = config.grid();
  const int n = static_cast<int>(sample.size());
  const VectorLD w = tapered_values(sample, config.taper);
  const MatrixCLD p = phases(sample, grid);
  const auto freqs = grid_frequencies(grid);
  const int nk = static_cast<int>(freqs.size());
  const Eigen::VectorXd radii = config.radial_arguments();
  const double h0 = h_coefficient(config.taper, {0, 0});
  const double nn = static_cast<double>(n);
  const double inner_scale = std::pow(kTwoPi / grid.lambda, 4) * std::pow(grid.lambda, 4) /
                             (nn * nn * nn * nn * h0 * h0);

  CLD total = 0.0L;
  for (int r = 0; r < config.a_r; ++r) {
    std::vector<LD> j0(nk);
    for (int k = 0; k < nk; ++k) {
      j0[k] = std::cyl_bessel_j(0.0L, static_cast<LD>(radii(r)) * freqs[k].norm());
    }
    CLD bracket = 0.0L;
    for (int k = 0; k < nk; ++k)
      for (int l = 0; l < nk; ++l)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int d = 0; d < n; ++d) {
                if (!selected(set, exclude, a, b, c, d)) continue;
                bracket += w(a) * w(b) * w(c) * w(d) * p(a, k) * std::conj(p(b, k)) * p(c, l) *
                           std::conj(p(d, l)) * j0[k] * j0[l];
              }
    total += static_cast<LD>(radii(r) * inner_scale) * bracket;
  }
  return checked_real(total / static_cast<LD>(config.lambda_r), "d2_over");
}

double d2_naive(const SpatialSample& sample, const TestConfig& config) {
  if (sample.size() < 4) throw InvalidArgument("d2_naive: need n >= 4 (no pairwise-different quadruples)");
  return d2_over(sample, config, IndexSet::AllDistinct);
}

double d2_complement(const SpatialSample& sample, const TestConfig& config) {
  const IndexSet distinct = IndexSet::AllDistinct;
  return d2_over(sample, config, IndexSet::PairDistinct, &distinct);
}

Eigen::VectorXcd c0_direct(const SpatialSample& sample, const Taper& taper,
                           const FrequencyGrid& grid, const Eigen::VectorXd& radii) {
  guard(sample.size() <= 64 && grid.a <= 8, "c0_direct needs n <= 64 and a <= 8");
  const int n = static_cast<int>(sample.size());
  const VectorLD w = tapered_values(sample, taper);
  const auto freqs = grid_frequencies(grid);
  const double h0 = h_coefficient(taper, {0, 0});
  const auto& loc = sample.locations();
  Eigen::VectorXcd out(radii.size());
  for (Eigen::Index r = 0; r < radii.size(); ++r) {
    CLD acc = 0.0L;
    for (const auto& om : freqs) {
      const LD j0 = std::cyl_bessel_j(0.0L, static_cast<LD>(radii(r)) * om.norm());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const LD dx = static_cast<LD>(loc(a, 0)) - loc(b, 0);
          const LD dy = static_cast<LD>(loc(a, 1)) - loc(b, 1);
          acc += w(a) * w(b) * std::polar(1.0L, dx * om.x() + dy * om.y()) * j0;
        }
    }
    out(r) = std::complex<double>(acc / (static_cast<LD>(n) * n * h0));
  }
  return out;
}

}  // namespace aniso::reference
