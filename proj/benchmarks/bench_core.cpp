#include <vector>

#include <benchmark/benchmark.h>

#include "dl2u/dgp.hpp"
#include "dl2u/estimator.hpp"
#include "dl2u/ks.hpp"
#include "dl2u/montecarlo.hpp"
#include "dl2u/rng.hpp"

using namespace dl2u;

static void BM_GaussianStream(benchmark::State& state) {
  GaussianStream g({1, 0}, Series::Innovation);
  for (auto _ : state) benchmark::DoNotOptimize(g());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GaussianStream);

static void BM_SimulatePath(benchmark::State& state) {
  ModelParams p;
  p.n = state.range(0);
  p.alpha = static_cast<double>(state.range(1)) / 10.0;
  p.kn = SequenceSpec::power_of_n(0.5);
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(p, {7, stream++}));
  state.SetItemsProcessed(state.iterations() * p.n);
}
BENCHMARK(BM_SimulatePath)->Args({1000, 0})->Args({1000, 5})->Args({100000, 5});

static void BM_OlsRho(benchmark::State& state) {
  ModelParams p;
  p.n = state.range(0);
  const SimulatedPath path = simulate_path(p, {3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(ols_rho(path));
}
BENCHMARK(BM_OlsRho)->Arg(1000)->Arg(100000);

static void BM_KsStatistic(benchmark::State& state) {
  GaussianStream g({11, 0}, Series::Innovation);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = g();
  for (auto _ : state) benchmark::DoNotOptimize(ks_statistic(x, TargetLaw::normal(1.0)));
}
BENCHMARK(BM_KsStatistic)->Arg(500)->Arg(100000);

static void BM_Replication(benchmark::State& state) {
  ExperimentSpec s;
  s.params.n = 1000;
  s.params.alpha = 0.5;
  s.paths_per_test = 500;
  std::int64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(s, rep++));
}
BENCHMARK(BM_Replication)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
