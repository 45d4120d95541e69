#include <benchmark/benchmark.h>

#include "flatcusp/corner_series.hpp"
#include "flatcusp/dynamics.hpp"
#include "flatcusp/induced.hpp"
#include "flatcusp/rng.hpp"

namespace {

using namespace flatcusp;

const Table& default_table() {
  static const Table table{TableParams{}};
  return table;
}

void BM_BilliardStep(benchmark::State& state) {
  const Table& table = default_table();
  const BilliardMap map(table);
  CounterRng rng(7, 0);
  PhasePoint x = sample_mu(table, rng);
  for (auto _ : state) {
    auto st = map.step(x);
    if (!st) {
      x = sample_mu(table, rng);
      continue;
    }
    x = st->x;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_BilliardStep);

void BM_ChartArclength(benchmark::State& state) {
  const Table& table = default_table();
  double s = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.chart_arclength(s));
    s += 0.013;
    if (s > table.params().eps0) s -= table.params().eps0;
  }
}
BENCHMARK(BM_ChartArclength);

void BM_CornerSeries(benchmark::State& state) {
  const Table& table = default_table();
  const SeriesOptions opt;
  const SeriesSeed seed = seed_for_target(table.params(), double(state.range(0)), 2.0);
  for (auto _ : state) {
    SeriesResult sr = run_series(table, seed, SeriesEngine::Exact, opt);
    benchmark::DoNotOptimize(sr.log_Lambda);
  }
}
BENCHMARK(BM_CornerSeries)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ReducedSeries(benchmark::State& state) {
  const Table& table = default_table();
  const SeriesOptions opt;
  const SeriesSeed seed = seed_for_target(table.params(), double(state.range(0)), 2.0);
  for (auto _ : state) {
    SeriesResult sr = run_series(table, seed, SeriesEngine::Reduced, opt);
    benchmark::DoNotOptimize(sr.log_Lambda);
  }
}
BENCHMARK(BM_ReducedSeries)->Arg(100)->Arg(1000)->Arg(10000);

void BM_InducedReturn(benchmark::State& state) {
  const Table& table = default_table();
  const InducedMap induced(table);
  CounterRng rng(11, 0);
  PhasePoint x{table.r_perp_hit(), 0.05};
  for (auto _ : state) {
    auto rs = induced.step(x);
    if (!rs) {
      x = sample_mu(table, rng);
      continue;
    }
    x = rs->exit;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_InducedReturn);

}  // namespace

BENCHMARK_MAIN();
