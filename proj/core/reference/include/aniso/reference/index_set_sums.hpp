#pragma once

// Brute-force index-set sums used as test oracles. O(n^4 a^2) and worse;
// every entry point refuses inputs beyond small toy sizes.

#include <Eigen/Core>
#include <complex>

#include "aniso/estimators.hpp"
#include "aniso/field_sim.hpp"
#include "aniso/frequency_grid.hpp"
#include "aniso/taper.hpp"

namespace aniso::reference {

enum class IndexSet {
  AllDistinct,   // j1..j4 pairwise different
  Restricted,    // j1 != j2, j1 != j4, j2 != j3, j3 != j4
  PairDistinct,  // j1 != j2, j3 != j4
};

bool contains(IndexSet set, int j1, int j2, int j3, int j4) noexcept;

/// Per frequency: sum over tuples in `set` (optionally only those outside
/// `exclude`) of w1 w2 w3 w4 exp(i (s1 - s2 + s3 - s4).omega_k).
Eigen::MatrixXcd quadruple_sums(const SpatialSample& sample, const Taper& taper,
                                const FrequencyGrid& grid, IndexSet set,
                                const IndexSet* exclude = nullptr);

/// (2 pi lambda)^2 / (2 n^4 H(0)^2) sum_k of quadruple_sums. The imaginary
/// part must vanish to 1e-9 relative; throws NumericalFailure otherwise.
double d1_over(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
               IndexSet set);

/// d1_over restricted to tuples in `set` but not in AllDistinct.
double d1_complement(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid,
                     IndexSet set);

/// d1_over on pairwise-different tuples. n >= 4 required; n <= 12, a <= 3.
double d1_naive(const SpatialSample& sample, const Taper& taper, const FrequencyGrid& grid);

/// Literal sextuple sum (radial r, frequencies k and l, tuples in `set`)
/// with J0 from the standard library.
double d2_over(const SpatialSample& sample, const TestConfig& config, IndexSet set,
               const IndexSet* exclude = nullptr);

/// d2_over on pairwise-different tuples. n <= 10, a <= 3, a_r <= 4.
double d2_naive(const SpatialSample& sample, const TestConfig& config);

/// d2_over on PairDistinct tuples that are not pairwise different.
double d2_complement(const SpatialSample& sample, const TestConfig& config);

/// Direct j1 != j2 double sum for c0_hat at each radius, imaginary part returned too.
Eigen::VectorXcd c0_direct(const SpatialSample& sample, const Taper& taper,
                           const FrequencyGrid& grid, const Eigen::VectorXd& radii);

}  // namespace aniso::reference
