#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "aniso/errors.hpp"
#include "aniso/field_sim.hpp"

namespace aniso {
namespace {

TEST(Locations, SinglePointInRange) {
  const Locations l = sample_locations(1, 2.0, {42, 0});
  ASSERT_EQ(l.rows(), 1);
  EXPECT_LE(l.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Locations, Deterministic) {
  EXPECT_EQ(sample_locations(100, 30.0, {9, 2}), sample_locations(100, 30.0, {9, 2}));
  EXPECT_NE(sample_locations(100, 30.0, {9, 2}), sample_locations(100, 30.0, {9, 3}));
}

TEST(Locations, UniformMoments) {
  const Locations l = sample_locations(10000, 30.0, {1, 0});
  // sd of the mean is 30 / sqrt(12 * 1e4) ~ 0.087
  EXPECT_LT(std::abs(l.col(0).mean()), 0.3);
  EXPECT_LT(std::abs(l.col(1).mean()), 0.3);
  EXPECT_LE(l.cwiseAbs().maxCoeff(), 15.0);
  const double var = (l.col(0).array() - l.col(0).mean()).square().mean();
  EXPECT_NEAR(var, 900.0 / 12.0, 3.0);
}

TEST(Locations, RejectsBadArguments) {
  EXPECT_THROW(sample_locations(0, 1.0, {}), InvalidArgument);
  EXPECT_THROW(sample_locations(5, 0.0, {}), InvalidArgument);
  EXPECT_THROW(sample_locations(5, -2.0, {}), InvalidArgument);
}

TEST(SpatialSample, ValidatesShapeAndDomain) {
  Locations l(2, 2);
  l << 0.0, 0.0, 1.0, -1.0;
  EXPECT_NO_THROW(SpatialSample(2.0, l, Eigen::VectorXd::Zero(2)));
  EXPECT_THROW(SpatialSample(2.0, l, Eigen::VectorXd::Zero(3)), InvalidArgument);
  EXPECT_THROW(SpatialSample(1.5, l, Eigen::VectorXd::Zero(2)), InvalidArgument);
  EXPECT_THROW(SpatialSample(0.0, l, Eigen::VectorXd::Zero(2)), InvalidArgument);
}

TEST(SimulateField, Deterministic) {
  const auto model = CovarianceModel::matern(3.0, 1.0);
  const Locations l = sample_locations(50, 10.0, {3, 0});
  EXPECT_EQ(simulate_field(model, 10.0, l, {3, 1}).values(),
            simulate_field(model, 10.0, l, {3, 1}).values());
  EXPECT_NE(simulate_field(model, 10.0, l, {3, 1}).values(),
            simulate_field(model, 10.0, l, {3, 2}).values());
}

TEST(SimulateField, SinglePointVariance) {
  const auto model = CovarianceModel::gaussian_aniso(2.0);
  const Locations l = Locations::Zero(1, 2);
  constexpr int kSeeds = 100000;
  double sum2 = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const double z = simulate_field(model, 1.0, l, {static_cast<std::uint64_t>(s), 0}).values()(0);
    sum2 += z * z;
  }
  EXPECT_NEAR(sum2 / kSeeds, 1.0, 0.05);
}

TEST(SimulateField, CoincidentPointsNearlyEqual) {
  Locations l(2, 2);
  l << 0.3, -0.2, 0.3, -0.2;
  const auto model = CovarianceModel::gaussian_aniso(1.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SimulatedField f = simulate_field_with_diagnostics(model, 2.0, l, {s, 0});
    EXPECT_GE(f.jitter, kJitterLadder[0]);
    const auto& v = f.sample.values();
    EXPECT_LE(std::abs(v(0) - v(1)), 10.0 * std::sqrt(f.jitter));
  }
}

TEST(SimulateField, EmpiricalLagCovariance) {
  const auto model = CovarianceModel::gaussian_aniso(1.0);
  double acc = 0.0;
  long pairs = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const Seed seed{77, rep};
    const Locations l = sample_locations(500, 30.0, seed.child(0));
    const auto z = simulate_field(model, 30.0, l, seed.child(1)).values();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < l.rows(); ++j) {
        const double d = (l.row(i) - l.row(j)).norm();
        if (d > 0.45 && d < 0.55) {
          acc += z(i) * z(j);
          ++pairs;
        }
      }
    }
  }
  ASSERT_GT(pairs, 500);
  EXPECT_NEAR(acc / pairs, std::exp(-1.0), 0.1);
}

TEST(CovarianceMatrix, SymmetricWithBoundedSpectrum) {
  for (const auto& model : {CovarianceModel::gaussian_aniso(1.0), CovarianceModel::gaussian_aniso(4.0),
                            CovarianceModel::matern(3.0, 1.0)}) {
    const Locations l = sample_locations(200, 30.0, {5, 0});
    const Eigen::MatrixXd s = covariance_matrix(model, l);
    EXPECT_EQ((s - s.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.diagonal().minCoeff(), 1.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), -10.0 * kJitterLadder[0]) << model.describe();
  }
}

}  // namespace
}  // namespace aniso
