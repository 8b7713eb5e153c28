#include <benchmark/benchmark.h>

#include <random>

#include "posgraph/hom.hpp"
#include "posgraph/witness.hpp"

using namespace posgraph;

namespace {

WeightedGraph sign_target(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  WeightedGraph h(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) h.set(i, j, coin(rng) ? 1 : -1);
  }
  return h;
}

void BM_HomCycle(benchmark::State& state) {
  const SimpleGraph g = cycle_graph(static_cast<int>(state.range(0)));
  const WeightedGraph h = sign_target(static_cast<int>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(hom_count(g, h));
}
BENCHMARK(BM_HomCycle)->Args({8, 4})->Args({12, 8})->Args({16, 16});

void BM_HomComplete(benchmark::State& state) {
  const SimpleGraph g = complete_graph(static_cast<int>(state.range(0)));
  const WeightedGraph h = sign_target(static_cast<int>(state.range(1)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(hom_count(g, h));
}
BENCHMARK(BM_HomComplete)->Args({4, 4})->Args({5, 6})->Args({6, 5});

void BM_HomG1IntoH(benchmark::State& state) {
  const SimpleGraph g = rook_graph_g1();
  const WeightedGraph h = build_paper_witness_H();
  for (auto _ : state) benchmark::DoNotOptimize(hom_count(g, h));
}
BENCHMARK(BM_HomG1IntoH)->Unit(benchmark::kMillisecond);

void BM_HomG1RowAssignment(benchmark::State& state) {
  const WeightedGraph h = build_paper_witness_H();
  for (auto _ : state) benchmark::DoNotOptimize(g1_row_assignment_count(h));
}
BENCHMARK(BM_HomG1RowAssignment)->Unit(benchmark::kMillisecond);

void BM_HomIntegerScan(benchmark::State& state) {
  const SimpleGraph g = rook_graph_g1();
  const EliminationOrder order = min_fill_order(g);
  const std::vector<long> w{1, -1, 2, -1, 0, 1, 2, 1, -2};
  for (auto _ : state) benchmark::DoNotOptimize(hom_count_integer(g, 3, w, order));
}
BENCHMARK(BM_HomIntegerScan);

void BM_HomBruteForce(benchmark::State& state) {
  const SimpleGraph g = cycle_graph(6);
  const WeightedGraph h = sign_target(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(hom_bruteforce(g, h));
}
BENCHMARK(BM_HomBruteForce)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
