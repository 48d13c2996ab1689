#include <benchmark/benchmark.h>

#include <random>

#include "mvs/database.hpp"
#include "mvs/rank.hpp"

namespace {

// 5000 objects, 11000 views (2.2 per object), dim 1024.
const mvs::Database& mvod_sized_database() {
  static const mvs::Database db = [] {
    constexpr std::size_t kObjects = 5000;
    constexpr std::uint32_t kDim = 1024;
    std::mt19937_64 rng(7);
    std::normal_distribution<float> normal;
    mvs::Manifest manifest;
    manifest.dim = kDim;
    mvs::FeatureFile features;
    features.dim = kDim;
    for (std::size_t i = 0; i < kObjects; ++i) {
      const std::size_t views = i < 1000 ? 3 : 2;
      mvs::ManifestObject obj{"obj" + std::to_string(i),
                              "cat" + std::to_string(i % 45), {}};
      for (std::size_t v = 0; v < views; ++v) {
        obj.views.push_back(obj.id + "/" + std::to_string(v));
        std::vector<float> values(kDim);
        for (auto& x : values) x = normal(rng);
        features.records.push_back({i, std::move(values)});
      }
      manifest.objects.push_back(std::move(obj));
    }
    return mvs::Database::build(manifest, features);
  }();
  return db;
}

mvs::ViewSet query_views(std::size_t count) {
  const auto& db = mvod_sized_database();
  mvs::ViewSet views;
  for (std::size_t i = 0; i < count; ++i) {
    views.push_back(db.object(17 + i).views.front());
  }
  return views;
}

void BM_RankStrategy(benchmark::State& state) {
  const auto strategy = mvs::kAllStrategies[state.range(0)];
  const auto& db = mvod_sized_database();
  const auto views =
      query_views(strategy == mvs::Strategy::kSingle ? 1 : 3);
  for (auto _ : state) {
    auto ranked = mvs::rank(db, views, strategy, 20);
    benchmark::DoNotOptimize(ranked);
  }
  state.SetLabel(std::string(mvs::strategy_name(strategy)));
}
BENCHMARK(BM_RankStrategy)->DenseRange(0, 8)->Unit(benchmark::kMillisecond);

void BM_RankLfAvgThreads(benchmark::State& state) {
  const auto& db = mvod_sized_database();
  const auto views = query_views(3);
  mvs::RankOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto ranked = mvs::rank(db, views, mvs::Strategy::kLfAvg, 20, options);
    benchmark::DoNotOptimize(ranked);
  }
}
BENCHMARK(BM_RankLfAvgThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
