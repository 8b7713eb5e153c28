#include <benchmark/benchmark.h>

#include <random>

#include "posgraph/polynomial.hpp"
#include "posgraph/structure.hpp"
#include "posgraph/witness.hpp"

using namespace posgraph;

namespace {

std::vector<double> random_point(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(k);
  for (double& v : x) v = u(rng);
  return x;
}

void BM_BuildPolynomial(benchmark::State& state) {
  const SimpleGraph g = rook_graph_g1();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hom_polynomial(g, m));
}
BENCHMARK(BM_BuildPolynomial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ValueAndGradient(benchmark::State& state) {
  const HomPolynomial p = hom_polynomial(rook_graph_g1(), static_cast<int>(state.range(0)));
  const std::vector<double> x = random_point(p.variable_count(), 4);
  std::vector<double> grad(p.variable_count());
  for (auto _ : state) benchmark::DoNotOptimize(p.value_and_gradient(x, grad));
  state.counters["terms"] = static_cast<double>(p.terms().size());
}
BENCHMARK(BM_ValueAndGradient)->Arg(2)->Arg(3);

void BM_MinimizeRestarts(benchmark::State& state) {
  const HomPolynomial p = hom_polynomial(rook_graph_g1(), 3);
  MinimizerConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_polynomial(p, cfg));
}
BENCHMARK(BM_MinimizeRestarts)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RestrictedPolynomial(benchmark::State& state) {
  const SimpleGraph g = survivor_g3();
  const ClassBlocks blocks = class_blocks(wl_partition(g), 3);
  for (auto _ : state) benchmark::DoNotOptimize(hom_polynomial(g, blocks.target_order, blocks.constraint));
}
BENCHMARK(BM_RestrictedPolynomial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
