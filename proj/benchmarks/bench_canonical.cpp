#include <benchmark/benchmark.h>

#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/structure.hpp"
#include "posgraph/witness.hpp"

using namespace posgraph;

namespace {

void BM_CanonicalAllSeven(benchmark::State& state) {
  const auto graphs = enumerate_graphs(7);
  for (auto _ : state) {
    for (const SimpleGraph& g : graphs) benchmark::DoNotOptimize(canonical_form(g));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(graphs.size()));
}
BENCHMARK(BM_CanonicalAllSeven)->Unit(benchmark::kMillisecond);

// Vertex-transitive inputs stress the individualization search.
void BM_CanonicalSymmetric(benchmark::State& state) {
  const std::vector<SimpleGraph> graphs{cycle_graph(16), complete_bipartite(8, 8), rook_graph_g1(), survivor_g4()};
  const SimpleGraph& g = graphs[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(canonical_form(g));
}
BENCHMARK(BM_CanonicalSymmetric)->DenseRange(0, 3);

void BM_SymmetryWitness(benchmark::State& state) {
  const auto graphs = enumerate_graphs(7);
  for (auto _ : state) {
    for (const SimpleGraph& g : graphs) benchmark::DoNotOptimize(symmetry_witness(g));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(graphs.size()));
}
BENCHMARK(BM_SymmetryWitness)->Unit(benchmark::kMillisecond);

void BM_EnumerateGraphs(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_graphs(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateGraphs)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
