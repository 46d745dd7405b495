#include "aniso/spectral_transform.hpp"

#include <cmath>
#include <numbers>

#include "aniso/detail/summation.hpp"
#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr Eigen::Index kBlock = 256;
constexpr int kReanchor = 64;

}  // namespace

ComplexMatrix phase_table(const Eigen::Ref<const Eigen::VectorXd>& x, const FrequencyGrid& grid) {
  const Eigen::Index n = x.size();
  const int side = grid.side();
  const double step = 2.0 * std::numbers::pi / grid.lambda;
  ComplexMatrix out(n, side);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = x(j);
    const std::complex<double> rot = std::polar(1.0, xj * step);
    std::complex<double> cur;
    for (int c = 0; c < side; ++c) {
      if (c % kReanchor == 0) {
        cur = std::polar(1.0, xj * grid.coordinate(c - grid.a));
      } else {
        cur *= rot;
      }
      out(j, c) = cur;
    }
  }
  return out;
}

TaperedDftField weighted_dft(const SpatialSample& sample, const Taper& taper,
                             const FrequencyGrid& grid, bool keep_point_phases) {
  grid.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(sample.size());
  if (n == 0) throw InvalidArgument("weighted_dft: empty sample");
  if (std::abs(grid.lambda - sample.lambda()) > 1e-12 * sample.lambda()) {
    throw InvalidArgument("weighted_dft: grid lambda differs from the sample's domain length");
  }

  TaperedDftField out;
  out.grid_ = grid;
  out.taper_ = taper;
  out.n_ = sample.size();
  out.h0_ = h_coefficient(taper, {0, 0});

  const auto& locs = sample.locations();
  const double lambda = sample.lambda();
  out.weights_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = taper.eval1(locs(j, 0) / lambda) * taper.eval1(locs(j, 1) / lambda);
    out.weights_(j) = h * sample.values()(j);
  }
  const Eigen::VectorXd w2 = out.weights_.array().square();
  out.diag_weight_ = detail::pairwise_sum<double>({w2.data(), static_cast<std::size_t>(n)});
  const Eigen::VectorXd w4 = w2.array().square();
  out.quartic_weight_ = detail::pairwise_sum<double>({w4.data(), static_cast<std::size_t>(n)});

  ComplexMatrix first = phase_table(locs.col(0), grid);
  ComplexMatrix second = phase_table(locs.col(1), grid);

  // [S | T] = first^T * [diag(w) second | diag(w^3) second], one block of points at a time.
  const int side = grid.side();
  detail::PairwiseAccumulator<ComplexMatrix> acc;
  ComplexMatrix rhs;
  for (Eigen::Index start = 0; start < n; start += kBlock) {
    const Eigen::Index len = std::min(kBlock, n - start);
    rhs.resize(len, 2 * side);
    for (Eigen::Index j = 0; j < len; ++j) {
      const double wj = out.weights_(start + j);
      rhs.row(j).head(side) = second.row(start + j) * wj;
      rhs.row(j).tail(side) = second.row(start + j) * (wj * wj * wj);
    }
    acc.push(first.middleRows(start, len).transpose() * rhs);
  }
  ComplexMatrix both = std::move(acc).result();
  out.sums_ = both.leftCols(side);
  out.cubic_ = both.rightCols(side);

  if (keep_point_phases) {
    out.phases_ = TaperedDftField::PhaseTables{std::move(first), std::move(second)};
  }
  return out;
}

ComplexMatrix TaperedDftField::normalized() const {
  const double scale =
      grid_.lambda / (2.0 * std::numbers::pi * static_cast<double>(n_) * std::sqrt(h0_));
  return sums_ * scale;
}

ComplexMatrix TaperedDftField::point_contribution(std::size_t j) const {
  if (!phases_) {
    throw InvalidArgument("point_contribution: point phases were not retained");
  }
  if (j >= n_) {
    throw InvalidArgument("point index " + std::to_string(j) + " out of range for n=" +
                          std::to_string(n_));
  }
  const auto jj = static_cast<Eigen::Index>(j);
  return weights_(jj) * (phases_->first.row(jj).transpose() * phases_->second.row(jj));
}

Eigen::MatrixXd tapered_periodogram(const TaperedDftField& dft) {
  return dft.normalized().cwiseAbs2();
}

Eigen::MatrixXd density_periodogram(const TaperedDftField& dft) {
  const double n = static_cast<double>(dft.n());
  const double lambda = dft.grid().lambda;
  return dft.sums().cwiseAbs2() * (lambda * lambda / (n * n * dft.h0()));
}

ComplexMatrix leave_one_out_dft(const TaperedDftField& dft, std::size_t j) {
  return dft.sums() - dft.point_contribution(j);
}

}  // namespace aniso
