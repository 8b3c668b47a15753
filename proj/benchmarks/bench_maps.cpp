#include "mgig/maps.hpp"
#include "mgig/yang_baxter.hpp"

#include <benchmark/benchmark.h>

using namespace mgig;

namespace {

SpdPair pair_of(int r) {
  RngStream rng(1, static_cast<std::uint64_t>(r));
  SpdMatrix x = random_spd(r, rng);
  SpdMatrix y = random_spd(r, rng);
  return {std::move(x), std::move(y)};
}

}  // namespace

static void BM_Phi(benchmark::State& state) {
  const SpdPair xy = pair_of(static_cast<int>(state.range(0)));
  const MapParams p(2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(phi(p, xy));
}
BENCHMARK(BM_Phi)->Arg(1)->Arg(3)->Arg(10);

static void BM_Psi(benchmark::State& state) {
  const SpdPair xy = pair_of(static_cast<int>(state.range(0)));
  const MapParams p(2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(psi(p, xy));
}
BENCHMARK(BM_Psi)->Arg(1)->Arg(3)->Arg(10);

static void BM_ConeCandidate(benchmark::State& state) {
  const SpdPair xy = pair_of(static_cast<int>(state.range(0)));
  const MapParams p(2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(cone_candidate(p, xy));
}
BENCHMARK(BM_ConeCandidate)->Arg(3)->Arg(10);

static void BM_PhiJacobianFd(benchmark::State& state) {
  const SpdPair xy = pair_of(static_cast<int>(state.range(0)));
  const MapParams p(2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(phi_jacobian_fd(p, xy));
}
BENCHMARK(BM_PhiJacobianFd)->Arg(1)->Arg(2)->Arg(3);

static void BM_YbResidual(benchmark::State& state) {
  RngStream rng(2, 0);
  const SpdTriple t = random_triple(static_cast<int>(state.range(0)), rng);
  const YbParams p(2.0, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(yb_residual(p, t));
}
BENCHMARK(BM_YbResidual)->Arg(1)->Arg(3)->Arg(5);

static void BM_AppendixTrace(benchmark::State& state) {
  RngStream rng(3, 0);
  const SpdTriple t = random_triple(3, rng);
  const YbParams p(2.0, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(appendix_trace(p, t));
}
BENCHMARK(BM_AppendixTrace);
