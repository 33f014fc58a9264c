#include <benchmark/benchmark.h>

#include <vector>

#include "acctest/accumulation.hpp"
#include "acctest/dosage.hpp"
#include "acctest/rng.hpp"
#include "acctest/seqtest.hpp"
#include "acctest/simlab.hpp"

using namespace acctest;

static std::vector<double> uniforms(std::size_t n) {
  Rng rng(42);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

static void BM_PathAndCutoff(benchmark::State& state) {
  const OrderedPValues p(uniforms(static_cast<std::size_t>(state.range(0))));
  const auto method = Method::parse("hingeexp:C=2");
  for (auto _ : state) {
    auto r = accumulation_test(p, method, 0.2);
    benchmark::DoNotOptimize(r.k_hat);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PathAndCutoff)->Arg(1000)->Arg(100000);

static void BM_PermutationPValue(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  std::vector<double> v(2 * m);
  for (auto& x : v) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(permutation_pvalue(v, m, m, Sign::Plus));
}
BENCHMARK(BM_PermutationPValue)->Arg(3)->Arg(5)->Arg(7);

static void BM_UnitIntegral(benchmark::State& state) {
  const auto fs = AccumulationSpec::forward_stop();
  for (auto _ : state) benchmark::DoNotOptimize(unit_integral(fs));
}
BENCHMARK(BM_UnitIntegral);

static void BM_RankedTrial(benchmark::State& state) {
  SimConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.n_nonnull = cfg.n / 10;
  std::size_t i = 0;
  for (auto _ : state) {
    auto p = generate_ranked_trial(cfg, i++);
    benchmark::DoNotOptimize(p.size());
  }
}
BENCHMARK(BM_RankedTrial)->Arg(1000)->Arg(10000);
BENCHMARK_MAIN();
