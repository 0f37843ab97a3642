#include <benchmark/benchmark.h>

#include "regenperm/combinatorics.hpp"
#include "regenperm/mallows.hpp"
#include "regenperm/qhat.hpp"

using namespace regenperm;

namespace {

void BM_IndecomposableTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(IndecomposableTable(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_IndecomposableTable)->Arg(10)->Arg(60)->Arg(200);

void BM_ComponentLaw(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(component_law(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ComponentLaw)->Arg(10)->Arg(40);

void BM_MallowsZdagger(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mallows_indecomposable_partition(static_cast<std::size_t>(state.range(0)), 0.5));
}
BENCHMARK(BM_MallowsZdagger)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GemExactRuns(benchmark::State& state) {
  const double tol = state.range(0) == 6 ? 1e-6 : 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(gem_u_exact(1.0, 8, tol));
}
BENCHMARK(BM_GemExactRuns)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Gem1Recursion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gem1_u_recursion(30));
}
BENCHMARK(BM_Gem1Recursion);

}  // namespace

BENCHMARK_MAIN();
