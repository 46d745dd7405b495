#include <benchmark/benchmark.h>

#include <random>

#include "aniso/bessel.hpp"
#include "aniso/covariance.hpp"
#include "aniso/estimators.hpp"
#include "aniso/field_sim.hpp"
#include "aniso/spectral_transform.hpp"

namespace {

using namespace aniso;

SpatialSample noise_sample(std::size_t n, double lambda) {
  const Locations l = sample_locations(n, lambda, {5, 0});
  Engine eng = make_engine({5, 1});
  std::normal_distribution<double> z;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = z(eng);
  return SpatialSample(lambda, l, v);
}

void BM_WeightedDft(benchmark::State& state) {
  const SpatialSample s = noise_sample(static_cast<std::size_t>(state.range(0)), 30.0);
  const FrequencyGrid g{80, 30.0, true};
  const Taper t = Taper::cosine(3);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_dft(s, t, g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * g.size());
}
BENCHMARK(BM_WeightedDft)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_RadialKernelBuild(benchmark::State& state) {
  TestConfig c;
  const Eigen::VectorXd radii = c.radial_arguments();
  for (auto _ : state) benchmark::DoNotOptimize(RadialKernel(c.grid(), radii));
}
BENCHMARK(BM_RadialKernelBuild)->Unit(benchmark::kMillisecond);

void BM_C0Hat(benchmark::State& state) {
  TestConfig c;
  const RadialKernel kernel(c.grid(), c.radial_arguments());
  const TaperedDftField dft = weighted_dft(noise_sample(2000, 30.0), c.taper, c.grid());
  for (auto _ : state) benchmark::DoNotOptimize(c0_hat(dft, kernel));
}
BENCHMARK(BM_C0Hat)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const IsotropyTester tester{TestConfig{}};
  const SpatialSample s = noise_sample(static_cast<std::size_t>(state.range(0)), 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(tester.evaluate(s));
}
BENCHMARK(BM_Evaluate)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SimulateField(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CovarianceModel m = CovarianceModel::gaussian_aniso(2.0);
  const Locations l = sample_locations(n, 30.0, {6, 0});
  for (auto _ : state) benchmark::DoNotOptimize(simulate_field(m, 30.0, l, {6, 1}));
}
BENCHMARK(BM_SimulateField)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BesselJ0(benchmark::State& state) {
  std::vector<double> xs(4096);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 60.0 * static_cast<double>(i) / xs.size();
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += bessel_j0(x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_BesselJ0);

}  // namespace
BENCHMARK_MAIN();
