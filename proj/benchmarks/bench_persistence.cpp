#include <benchmark/benchmark.h>

#include "tpskit/dataset.hpp"
#include "tpskit/metric.hpp"
#include "tpskit/persistence.hpp"

namespace {

using namespace tpskit;

struct Instance {
  DistanceMatrix d;
  VertexWeights w;
};

Instance make_instance(std::size_t m) {
  const auto ds = make_hypercube_clusters(2 * m, 4, 2.0, 1.0, 1.0, 11);
  const auto target = ds.indices_of(0);
  const auto other = ds.indices_of(1);
  const Matrix tp = ds.points.select_rows(target);
  return {pairwise_distances(tp, MetricKind::euclidean),
          neighbor_weights(cross_distances(tp, ds.points.select_rows(other), MetricKind::euclidean), 1)};
}

void BM_FiltrationH0(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_filtration(inst.d, inst.w, 0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FiltrationH0)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_PersistenceH0(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  const auto f = build_filtration(inst.d, inst.w, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_persistence(f));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PersistenceH0)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_PersistenceH1(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  const auto f = build_filtration(inst.d, inst.w, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_persistence(f));
  }
}
BENCHMARK(BM_PersistenceH1)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
