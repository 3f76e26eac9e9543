// Microbenchmarks for the hot paths: PageRank power iteration, RA candidate
// scoring, Kendall tau, and the probe/update cycle.
//
//   ./probekit_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "probekit/generator.hpp"
#include "probekit/inference.hpp"
#include "probekit/metrics.hpp"
#include "probekit/probing.hpp"
#include "probekit/rank.hpp"

namespace {

using namespace probekit;

GenConfig bench_config(std::size_t n, std::size_t m0) {
  GenConfig cfg;
  cfg.n = n;
  cfg.m0 = m0;
  cfg.periods = 1;
  cfg.seed = 7;
  return cfg;
}

void BM_Pagerank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Snapshot snap = gen_initial(bench_config(n, n * 10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pagerank(snap.g()));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pagerank)->Arg(1000)->Arg(5000)->Arg(20000)->Complexity();

void BM_WeightedPagerank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Snapshot snap = gen_initial(bench_config(n, n * 10));
  const auto weight = [](VertexId, VertexId dst) { return 1.0 + dst % 7; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_pagerank(snap.g(), weight));
  }
}
BENCHMARK(BM_WeightedPagerank)->Arg(1000)->Arg(5000);

void BM_RaScores(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Snapshot snap = gen_initial(bench_config(n, n * 10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ra_scores(snap.g(), 5));
  }
}
BENCHMARK(BM_RaScores)->Arg(500)->Arg(1000)->Arg(2000);

void BM_KendallTau(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(11);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(rng() % 1000);
    y[i] = static_cast<double>(rng() % 1000);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(kendall_tau_b(x, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->Arg(1000)->Arg(10000)->Arg(100000)->Complexity();

void BM_SelectRrch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(13);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = static_cast<double>(rng() % 1000);
  StrategyConfig cfg;
  cfg.k = n / 100 + 1;
  RoundRobinRecord record(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_rrch(scores, record, cfg, rng));
  }
}
BENCHMARK(BM_SelectRrch)->Arg(5000)->Arg(50000);

void BM_Evolve(benchmark::State& state) {
  const GenConfig cfg = bench_config(5000, 50000);
  const Snapshot snap = gen_initial(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(snap, cfg, 1));
  }
}
BENCHMARK(BM_Evolve);

}  // namespace

BENCHMARK_MAIN();
