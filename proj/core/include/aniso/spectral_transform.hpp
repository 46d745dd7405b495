#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <optional>

#include "aniso/field_sim.hpp"
#include "aniso/frequency_grid.hpp"
#include "aniso/taper.hpp"

namespace aniso {

using ComplexMatrix = Eigen::MatrixXcd;

/// Weighted sums of the tapered data over a frequency grid.
///
/// With w_j = h(s_j / lambda) Z(s_j) and theta_j(k) = s_j . omega_k:
///   sums()(k)       = S(k)  = sum_j w_j   exp(i theta_j(k))
///   cubic_sums()(k) = T(k)  = sum_j w_j^3 exp(i theta_j(k))
///   diag_weight()   = sum_j w_j^2,  quartic_weight() = sum_j w_j^4.
/// Matrices are indexed (k_1 + a, k_2 + a).
class TaperedDftField {
 public:
  const FrequencyGrid& grid() const noexcept { return grid_; }
  const Taper& taper() const noexcept { return taper_; }
  std::size_t n() const noexcept { return n_; }
  /// H_{2,h}(0) of the taper.
  double h0() const noexcept { return h0_; }

  const ComplexMatrix& sums() const noexcept { return sums_; }
  const ComplexMatrix& cubic_sums() const noexcept { return cubic_; }
  double diag_weight() const noexcept { return diag_weight_; }
  double quartic_weight() const noexcept { return quartic_weight_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  /// J(k) = S(k) lambda / (2 pi n H(0)^{1/2}).
  ComplexMatrix normalized() const;

  bool has_point_phases() const noexcept { return phases_.has_value(); }

  /// w_j exp(i s_j . omega_k) for one point over the whole grid.
  ComplexMatrix point_contribution(std::size_t j) const;

 private:
  friend TaperedDftField weighted_dft(const SpatialSample&, const Taper&, const FrequencyGrid&,
                                      bool);
  struct PhaseTables {
    ComplexMatrix first;   // n x 2a, exp(i s_{j,1} omega_{k_1})
    ComplexMatrix second;  // n x 2a, exp(i s_{j,2} omega_{k_2})
  };

  FrequencyGrid grid_;
  Taper taper_ = Taper::cosine(3);
  std::size_t n_ = 0;
  double h0_ = 1.0;
  ComplexMatrix sums_;
  ComplexMatrix cubic_;
  double diag_weight_ = 0.0;
  double quartic_weight_ = 0.0;
  Eigen::VectorXd weights_;
  std::optional<PhaseTables> phases_;
};

/// Computes S and T for every grid frequency using separable per-coordinate
/// phase tables; accumulation over points is blocked and pairwise.
/// `keep_point_phases` retains the n x 2a tables for leave_one_out_dft.
TaperedDftField weighted_dft(const SpatialSample& sample, const Taper& taper,
                             const FrequencyGrid& grid, bool keep_point_phases = false);

/// I(k) = |J(k)|^2 with J as in TaperedDftField::normalized().
Eigen::MatrixXd tapered_periodogram(const TaperedDftField& dft);

/// (2 pi)^2 I(k): the periodogram on the scale of f under the
/// f(w) = \int c(h) e^{-i w.h} dh convention (E ~ f(omega_k)).
Eigen::MatrixXd density_periodogram(const TaperedDftField& dft);

/// S(k) - w_j exp(i s_j . omega_k). Requires retained point phases.
ComplexMatrix leave_one_out_dft(const TaperedDftField& dft, std::size_t j);

/// Per-coordinate phase table exp(i x_j omega_k), j rows, k = -a..a-1 columns,
/// built by repeated rotation and re-anchored to direct evaluation every 64 steps.
ComplexMatrix phase_table(const Eigen::Ref<const Eigen::VectorXd>& x, const FrequencyGrid& grid);

}  // namespace aniso
