#include <benchmark/benchmark.h>

#include "tpskit/eval.hpp"
#include "tpskit/presets.hpp"
#include "tpskit/tps.hpp"

namespace {

using namespace tpskit;

// Timing regime of the selection-time study: 2500 points in R^4.
const LabeledDataset& hypercube() {
  static const LabeledDataset ds = make_dataset({.kind = "hypercube", .seed = 3});
  return ds;
}

void BM_TpsQuantile(benchmark::State& state) {
  TpsConfig cfg;
  cfg.q = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tps(hypercube(), cfg));
  }
}
BENCHMARK(BM_TpsQuantile)->Arg(5)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_TpsMoons(benchmark::State& state) {
  const auto ds = make_dataset({.kind = "moons", .n = static_cast<std::size_t>(state.range(0)), .seed = 5});
  TpsConfig cfg;
  cfg.q = 0.15;
  cfg.k = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tps(ds, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TpsMoons)->RangeMultiplier(2)->Range(250, 4000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_KnnPredict(benchmark::State& state) {
  const auto ds = make_dataset({.kind = "moons", .n = 1000, .seed = 5});
  const auto split = stratified_split(ds, 0.3, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_predict(split.train, 5, split.test.points, MetricKind::euclidean));
  }
}
BENCHMARK(BM_KnnPredict)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
