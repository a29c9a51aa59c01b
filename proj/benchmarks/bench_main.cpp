#include <benchmark/benchmark.h>

#include <vector>

#include "indep/correlation.hpp"
#include "indep/decision.hpp"
#include "indep/distributions.hpp"
#include "indep/oracle.hpp"
#include "indep/random.hpp"
#include "indep/simulation.hpp"
#include "indep/statistics.hpp"

using namespace indep;

static void BM_NormalCdf(benchmark::State& state) {
  double x = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_cdf(x));
    x = x > 6.0 ? -6.0 : x + 0.001;
  }
}
BENCHMARK(BM_NormalCdf);

static void BM_ChisqCdf(benchmark::State& state) {
  const double df = static_cast<double>(state.range(0));
  const DegreesOfFreedom d(df);
  double x = 0.5 * df;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chisq_cdf(x, d));
    x = x > 1.5 * df + 10 ? 0.5 * df : x + 0.01;
  }
}
BENCHMARK(BM_ChisqCdf)->Arg(3)->Arg(45)->Arg(19900);

static void BM_ChisqQuantile(benchmark::State& state) {
  const DegreesOfFreedom d(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(chisq_quantile(Probability(0.05), d));
}
BENCHMARK(BM_ChisqQuantile)->Arg(3)->Arg(19900);

static void BM_CorrelationSummary(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  RandomStream rng(1);
  const DataMatrix data = sample_equicorrelated_normal(n, p, 0.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_summary(data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pair_count(p)));
}
BENCHMARK(BM_CorrelationSummary)->Args({15, 3})->Args({100, 100})->Args({200, 200});

static void BM_EquicorrelatedSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  RandomStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_equicorrelated_normal(n, p, 0.02, rng));
}
BENCHMARK(BM_EquicorrelatedSample)->Args({200, 200});

static void BM_SphereSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  RandomStream rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_null_correlations(n, p, rng));
}
BENCHMARK(BM_SphereSample)->Args({20, 12})->Args({200, 200});

static void BM_ComputeStatistics(benchmark::State& state) {
  RandomStream rng(4);
  const auto p = static_cast<std::size_t>(state.range(0));
  const auto corr = sample_null_correlations(100, p, rng);
  for (auto _ : state) benchmark::DoNotOptimize(compute_statistics(corr));
}
BENCHMARK(BM_ComputeStatistics)->Arg(10)->Arg(200);

static void BM_SimulationCell(benchmark::State& state) {
  SimulationSpec spec;
  spec.n = static_cast<std::size_t>(state.range(0));
  spec.p = static_cast<std::size_t>(state.range(1));
  spec.replications = 200;
  spec.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_rejection_rate(spec));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_SimulationCell)->Args({15, 3})->Args({60, 50})->Args({200, 200})->Unit(benchmark::kMillisecond);

static void BM_MomentCheck(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        verify_moment_by_simulation(MomentIdentity::mao_fourth_two_pairs, 20, 10000, 6));
  }
}
BENCHMARK(BM_MomentCheck)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
