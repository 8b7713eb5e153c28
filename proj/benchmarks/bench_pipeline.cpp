#include <benchmark/benchmark.h>

#include "posgraph/enumerate.hpp"
#include "posgraph/pipeline.hpp"

using namespace posgraph;

namespace {

void BM_ClassifyAll(benchmark::State& state) {
  const auto graphs = enumerate_graphs(static_cast<int>(state.range(0)));
  PipelineConfig cfg;
  cfg.record_timing = false;
  for (auto _ : state) {
    for (const SimpleGraph& g : graphs) benchmark::DoNotOptimize(classify(g, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(graphs.size()));
}
BENCHMARK(BM_ClassifyAll)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_RecordJson(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.record_timing = false;
  const ClassificationRecord r = classify(star_graph(3), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(record_from_json(record_to_json(r)));
}
BENCHMARK(BM_RecordJson);

}  // namespace

BENCHMARK_MAIN();
