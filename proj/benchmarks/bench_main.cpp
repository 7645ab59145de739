#include <benchmark/benchmark.h>

#include "innerlab/experiments.hpp"

using namespace innerlab;

namespace {

CriticalSet sample_set() {
  return CriticalSet::make({{{0.3, 0.2}, 1}, {{-0.5, 0.1}, 1}, {{0.1, -0.6}, 2}, {{0.0, 0.45}, 1}});
}

void BM_CriticalPoints(benchmark::State& state) {
  std::vector<Zero> zs;
  for (int k = 0; k < state.range(0); ++k) zs.push_back({std::polar(0.8, 2.4 * k), 1});
  const BlaschkeProduct b(zs);
  for (auto _ : state) benchmark::DoNotOptimize(critical_points(b));
}
BENCHMARK(BM_CriticalPoints)->Arg(4)->Arg(16)->Arg(64);

void BM_HeinsInverse(benchmark::State& state) {
  const CriticalSet c = sample_set();
  for (auto _ : state) benchmark::DoNotOptimize(heins_inverse(c));
}
BENCHMARK(BM_HeinsInverse);

void BM_SolveLiouville(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<double> trace(static_cast<std::size_t>(2 * n), std::log(0.5 / (1 - 0.81)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_liouville(0.9, trace, n));
}
BENCHMARK(BM_SolveLiouville)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RobertsCantor(benchmark::State& state) {
  const CircleMeasure mu = CircleMeasure::cantor(Interval::full_circle(), 1.0 / 3.0, 12, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(roberts_decompose(mu, {}));
}
BENCHMARK(BM_RobertsCantor)->Unit(benchmark::kMillisecond);

void BM_GapOverInterval(benchmark::State& state) {
  const Evaluator s = evaluator_of(SingularInner(CircleMeasure::dirac(0.0, 0.3)));
  const std::vector<double> radii = dyadic_radii(6, 14);
  for (auto _ : state) benchmark::DoNotOptimize(gap_over_interval(s, Interval(-0.5, 1.0), radii, 64));
}
BENCHMARK(BM_GapOverInterval)->Unit(benchmark::kMillisecond);

void BM_UnstableExample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(unstable_outer_derivative_at_origin(n, 64 * n));
}
BENCHMARK(BM_UnstableExample)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
