// Hot paths: conditional expectation, the F4 scan, and one-parameter checks.

#include <benchmark/benchmark.h>

#include "mpm/mpm.hpp"

namespace {

using namespace mpm;

void BM_Condexp(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto F = build_product_dyadic({depth});
  const auto x = random_terminal(F.outcomes(), 1);
  const auto& partition = F.at(MultiIndex{depth / 2});
  for (auto _ : state) benchmark::DoNotOptimize(condexp(x, partition, F.space()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(F.outcomes()));
}
BENCHMARK(BM_Condexp)->Arg(6)->Arg(10)->Arg(12);

void BM_CheckF4(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto F = build_product_dyadic({depth, depth});
  for (auto _ : state) benchmark::DoNotOptimize(check_f4(F));
}
BENCHMARK(BM_CheckF4)->Arg(2)->Arg(4)->Arg(5);

void BM_MartingaleFromTerminal(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto F = std::make_shared<const MultiFiltration>(build_product_dyadic({depth, depth}));
  const auto x = random_terminal(F->outcomes(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(martingale_from_terminal(x, F));
}
BENCHMARK(BM_MartingaleFromTerminal)->Arg(3)->Arg(4)->Arg(5);

void BM_TheoremA(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto F = std::make_shared<const MultiFiltration>(build_product_dyadic({depth}));
  const auto f = random_martingale(F, 3);
  const auto a = random_martingale(F, 4);
  for (auto _ : state) benchmark::DoNotOptimize(theorem_a_check(f, a));
}
BENCHMARK(BM_TheoremA)->Arg(8)->Arg(10);

void BM_SquareFunction(benchmark::State& state) {
  const auto F = std::make_shared<const MultiFiltration>(build_product_dyadic({4, 4}));
  const auto f = boundary_reduce(random_martingale(F, 5));
  for (auto _ : state) benchmark::DoNotOptimize(square_function(f.family()));
}
BENCHMARK(BM_SquareFunction);

}  // namespace

BENCHMARK_MAIN();
