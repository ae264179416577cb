#include "cfp/asymptotics.hpp"
#include "cfp/gillespie.hpp"
#include "cfp/khintchine.hpp"
#include "cfp/measure.hpp"
#include "cfp/poisson_summation.hpp"
#include "cfp/sampler.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace cfp;

static void BM_CoefficientDp(benchmark::State& state) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  CountOptions opt;
  opt.method = CountMethod::coefficient_dp;
  for (auto _ : state) benchmark::DoNotOptimize(group_count_distribution(static_cast<int>(state.range(0)), a, opt));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoefficientDp)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_RootOfUnity(benchmark::State& state) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  CountOptions opt;
  opt.method = CountMethod::root_of_unity;
  for (auto _ : state) benchmark::DoNotOptimize(group_count_distribution(static_cast<int>(state.range(0)), a, opt));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RootOfUnity)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_RationalDp(benchmark::State& state) {
  const auto a = ParameterFunction::parse("power:p=2,q=1");
  CountOptions opt;
  opt.mode = Arithmetic::rational;
  for (auto _ : state) benchmark::DoNotOptimize(group_count_distribution(static_cast<int>(state.range(0)), a, opt));
}
BENCHMARK(BM_RationalDp)->Arg(40)->Arg(80)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_LogPartitionFunction(benchmark::State& state) {
  const auto a = ParameterFunction::power(1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(log_partition_function(static_cast<int>(state.range(0)), a));
}
BENCHMARK(BM_LogPartitionFunction)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_PoissonSeries(benchmark::State& state) {
  const std::complex<long double> z(0.001L, 3.0L);
  for (auto _ : state) benchmark::DoNotOptimize(power_exp_series(z, 2.5L, 1e-16L, SeriesRoute::poisson));
}
BENCHMARK(BM_PoissonSeries);

static void BM_DirectSeries(benchmark::State& state) {
  const std::complex<long double> z(0.01L, 0.5L);
  for (auto _ : state) benchmark::DoNotOptimize(power_exp_series(z, 2.5L, 1e-16L, SeriesRoute::direct));
}
BENCHMARK(BM_DirectSeries)->Unit(benchmark::kMicrosecond);

static void BM_KhintchineRepresentation(benchmark::State& state) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  const int N = static_cast<int>(state.range(0));
  const int n = static_cast<int>(std::sqrt(static_cast<double>(N)));
  const long double d = solve_delta(n, N, a);
  for (auto _ : state) benchmark::DoNotOptimize(representation_probability(n, N, d, a));
}
BENCHMARK(BM_KhintchineRepresentation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_GillespieEvents(benchmark::State& state) {
  SimulationConfig cfg(static_cast<int>(state.range(0)), ParameterFunction::power(1.0, 1.0));
  cfg.k = static_cast<int>(state.range(1));
  cfg.events = 100000;
  cfg.thin = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.events);
}
BENCHMARK(BM_GillespieEvents)->Args({100, 2})->Args({1000, 2})->Args({100, 3})->Unit(benchmark::kMillisecond);

static void BM_RejectionSampler(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto a = ParameterFunction::power(1.0, 1.0);
  const TiltedPoissonSpec spec(a, N, optimal_tilt(N, a));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_equilibrium(spec, rng));
}
BENCHMARK(BM_RejectionSampler)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
