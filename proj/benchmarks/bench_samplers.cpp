#include "mgig/distributions.hpp"
#include "mgig/mh_sampler.hpp"

#include <benchmark/benchmark.h>

using namespace mgig;

static void BM_GigSample(benchmark::State& state) {
  // lambda, alpha, beta chosen to hit the three rejection regimes.
  static const GigParams settings[] = {{0.3, 0.01, 0.01}, {0.5, 0.3, 0.3}, {3.0, 2.0, 2.0}};
  const GigParams& p = settings[state.range(0)];
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(gig_sample(p, rng));
}
BENCHMARK(BM_GigSample)->DenseRange(0, 2);

static void BM_WishartSample(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const WishartParams p(r + 1.0, SpdMatrix::identity(r));
  RngStream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(wishart_sample(p, rng));
}
BENCHMARK(BM_WishartSample)->Arg(2)->Arg(5)->Arg(10);

static void BM_MgigChain(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const MgigParams p(r, SpdMatrix::identity(r), SpdMatrix::identity(r));
  ChainConfig cfg;
  cfg.burn_in = 500;
  for (auto _ : state) {
    RngStream rng(3, 0);
    benchmark::DoNotOptimize(mgig_mh_sample(p, cfg, 1000, rng));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_MgigChain)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
