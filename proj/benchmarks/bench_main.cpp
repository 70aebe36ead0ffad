#include <benchmark/benchmark.h>

#include "blockcs/combinatorics.hpp"
#include "blockcs/random.hpp"
#include "blockcs/recovery_solver.hpp"
#include "blockcs/rip_analysis.hpp"
#include "blockcs/sensing.hpp"

namespace {

using namespace blockcs;

void BM_ExactRic(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int s = static_cast<int>(state.range(1));
  const int threads = static_cast<int>(state.range(2));
  auto phi = gen_gaussian(2 * l, BlockStructure::uniform(l, 2), 1);
  for (auto _ : state) benchmark::DoNotOptimize(exact_block_ric(phi, s, RicOptions{10'000'000, threads}));
  state.counters["supports"] = static_cast<double>(binomial(l, s));
}
BENCHMARK(BM_ExactRic)
    ->Args({12, 2, 1})
    ->Args({12, 4, 1})
    ->Args({16, 4, 1})
    ->Args({16, 4, 4})
    ->Args({20, 5, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_SolveNoiseless(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int l = static_cast<int>(state.range(1));
  auto st = BlockStructure::uniform(l, 2);
  auto phi = gen_gaussian(m, st, 2);
  Rng rng(2);
  const Vector b = apply(phi, random_block_sparse(rng, st, random_support(rng, l, 2)));
  int iterations = 0;
  for (auto _ : state) {
    auto r = solve_noiseless(phi, b);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r);
  }
  state.counters["iters"] = iterations;
}
BENCHMARK(BM_SolveNoiseless)->Args({16, 12})->Args({32, 32})->Args({64, 64})->Unit(benchmark::kMillisecond);

void BM_SolveNoisy(benchmark::State& state) {
  auto st = BlockStructure::uniform(12, 2);
  auto phi = gen_block_incoherent(16, st, 3);
  Rng rng(3);
  const Vector b = apply(phi, random_block_sparse(rng, st, {1, 7})) + random_on_sphere(rng, 16, 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_noisy(phi, b, 1e-2));
}
BENCHMARK(BM_SolveNoisy)->Unit(benchmark::kMillisecond);

void BM_BlockSoftThreshold(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  auto st = BlockStructure::uniform(l, 4);
  Rng rng(4);
  BlockSignal x(st, rng.normal_vector(st.total_dim()));
  for (auto _ : state) benchmark::DoNotOptimize(block_soft_threshold(x, 1.5));
  state.SetItemsProcessed(state.iterations() * st.total_dim());
}
BENCHMARK(BM_BlockSoftThreshold)->Arg(16)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
