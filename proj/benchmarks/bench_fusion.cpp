#include <benchmark/benchmark.h>

#include <random>

#include "mvs/fusion.hpp"

namespace {

mvs::ViewSet random_views(std::size_t count, std::size_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> normal;
  mvs::ViewSet views;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<float> v(dim);
    for (auto& x : v) x = normal(rng);
    views.push_back(mvs::l2_normalize(mvs::FeatureVector(std::move(v))));
  }
  return views;
}

void BM_EuclideanDistance(benchmark::State& state) {
  const auto views = random_views(2, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvs::euclidean_distance(views[0], views[1]));
  }
}
BENCHMARK(BM_EuclideanDistance)->Arg(128)->Arg(1024)->Arg(4096);

void BM_EarlyFuse(benchmark::State& state) {
  const auto views = random_views(static_cast<std::size_t>(state.range(0)), 1024, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvs::early_fuse(views, mvs::EarlyFusion::kAvg));
  }
}
BENCHMARK(BM_EarlyFuse)->Arg(2)->Arg(5);

void BM_LateFuse(benchmark::State& state) {
  const auto q = random_views(4, 1024, 3);
  const auto o = random_views(3, 1024, 4);
  const auto m = mvs::pairwise_distances(q, o);
  const auto mode = mvs::kAllStrategies[state.range(0)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvs::late_fuse(m, mode));
  }
  state.SetLabel(std::string(mvs::strategy_name(mode)));
}
BENCHMARK(BM_LateFuse)->DenseRange(3, 8);

}  // namespace
