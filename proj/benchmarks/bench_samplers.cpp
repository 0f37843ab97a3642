#include <benchmark/benchmark.h>

#include "regenperm/biased.hpp"
#include "regenperm/blocked.hpp"
#include "regenperm/pshifted.hpp"
#include "regenperm/qhat.hpp"

using namespace regenperm;

namespace {

// Heavy geometric tails make ψ ask for deep ranks, where the two index
// structures differ most.
void BM_PShifted(benchmark::State& state, PsiIndex index) {
  const auto p = DiscreteDist::geometric(static_cast<double>(state.range(1)) / 100.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_pshifted(p, n, rng, index));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_PShifted, gap_runs, PsiIndex::gap_runs)
    ->ArgsProduct({{1 << 10, 1 << 14}, {50, 99}});
BENCHMARK_CAPTURE(BM_PShifted, fenwick, PsiIndex::fenwick)
    ->ArgsProduct({{1 << 10, 1 << 14}, {50, 99}});

// Unseen GEM mass shrinks geometrically, so long sequential runs exhaust any budget.
void BM_BiasedSequential(benchmark::State& state) {
  const Driver gem = StickBreaking::gem(2.0);
  Rng rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sample_pbiased_sequential(gem, static_cast<std::size_t>(state.range(0)), rng, std::uint64_t{1} << 50));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiasedSequential)->Arg(4)->Arg(8)->Arg(16);

void BM_BiasedPpy(benchmark::State& state) {
  const Driver gem = StickBreaking::gem(2.0);
  Rng rng(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_pbiased_ppy(gem, static_cast<std::size_t>(state.range(0)), rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiasedPpy)->Arg(4)->Arg(8)->Arg(16)->Arg(512);

void BM_WkFirstComponent(benchmark::State& state) {
  const Driver gem = StickBreaking::gem(1.0);
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(wk_interval_process(gem, rng));
}
BENCHMARK(BM_WkFirstComponent);

void BM_Blocked(benchmark::State& state) {
  const auto p = DiscreteDist::geometric(0.1);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_blocks(p, static_cast<std::size_t>(state.range(0)), rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Blocked)->Arg(1 << 10)->Arg(1 << 16);

void BM_StationaryWindow(benchmark::State& state) {
  const auto p = DiscreteDist::geometric(0.5);
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(sample_stationary_window(p, -3, 3, rng));
}
BENCHMARK(BM_StationaryWindow);

void BM_QhatRuns(benchmark::State& state) {
  const auto k = QhatKernel::gem(1.0);
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(u_k_via_increasing_runs(k, 6, 1000, rng));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_QhatRuns);

}  // namespace
