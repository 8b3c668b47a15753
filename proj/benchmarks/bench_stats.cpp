#include "mgig/identities.hpp"
#include "mgig/independence.hpp"
#include "mgig/yang_baxter.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace mgig;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t stream) {
  RngStream rng(7, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

static void BM_Dcov2Fast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = normals(n, 1), y = normals(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dcov2_fast(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dcov2Fast)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_Dcov2Exact(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RngStream rng(3, 0);
  Eigen::MatrixXd x(n, 3), y(n, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x.data()[i] = rng.normal();
    y.data()[i] = rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(dcov2_exact(x, y));
}
BENCHMARK(BM_Dcov2Exact)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_EnergyStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampleBatch a = SampleBatch::from_scalars(normals(n, 4));
  const SampleBatch b = SampleBatch::from_scalars(normals(n, 5));
  for (auto _ : state) benchmark::DoNotOptimize(energy_statistic(a, b));
}
BENCHMARK(BM_EnergyStatistic)->Arg(1 << 12)->Arg(1 << 15);

static void BM_DistanceCorrelationTest(benchmark::State& state) {
  const SampleBatch u = SampleBatch::from_scalars(normals(20000, 6));
  const SampleBatch v = SampleBatch::from_scalars(normals(20000, 7));
  for (auto _ : state) {
    RngStream rng(8, 0);
    benchmark::DoNotOptimize(distance_correlation(u, v, 99, rng));
  }
}
BENCHMARK(BM_DistanceCorrelationTest)->Unit(benchmark::kMillisecond);

static void BM_TransportCheck(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  RngStream rng(9, 0);
  std::vector<SpdPair> pairs;
  for (int i = 0; i < 100; ++i) {
    SpdMatrix x = random_spd(r, rng);
    SpdMatrix y = random_spd(r, rng);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  const SpdMatrix a = SpdMatrix::identity(r);
  for (auto _ : state) benchmark::DoNotOptimize(density_transport_check(0.7, a, a, MapParams(2.0, 0.5), pairs));
}
BENCHMARK(BM_TransportCheck)->Arg(1)->Arg(3);
