#include "mvs/rank.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "mvs/error.hpp"

namespace mvs {
namespace {

void check_query(const Database& db, std::span<const FeatureVector> views,
                 Strategy strategy) {
  if (views.empty()) {
    throw Error(ErrorCode::kEmptyViewSet, "query has no views");
  }
  for (const auto& v : views) {
    if (v.dim() != db.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "query view has dim " + std::to_string(v.dim()) +
                      ", index expects dim " + std::to_string(db.dim()));
    }
  }
  if (strategy == Strategy::kSingle && views.size() != 1) {
    throw Error(ErrorCode::kInvalidQuery,
                "strategy 'single' takes exactly one query view, got " +
                    std::to_string(views.size()));
  }
}

template <typename Fn>
void for_each_object(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace

std::vector<double> object_distances(const Database& db,
                                     std::span<const FeatureVector> query_views,
                                     Strategy strategy,
                                     const RankOptions& options) {
  check_query(db, query_views, strategy);
  std::vector<double> out(db.size());

  if (is_early_fusion(strategy)) {
    const auto mode =
        strategy == Strategy::kEfMax ? EarlyFusion::kMax : EarlyFusion::kAvg;
    const FeatureVector fused_query =
        early_fuse(query_views, mode, options.renormalize_ef);
    for_each_object(db.size(), options.threads, [&](std::size_t i) {
      out[i] = euclidean_distance(fused_query,
                                  db.fused(i, mode, options.renormalize_ef));
    });
    return out;
  }

  for_each_object(db.size(), options.threads, [&](std::size_t i) {
    const auto m = pairwise_distances(query_views, db.object(i).views);
    out[i] = late_fuse(m, strategy, options.late);
  });
  return out;
}

RankedList rank(const Database& db, std::span<const FeatureVector> query_views,
                Strategy strategy, std::size_t k, const RankOptions& options) {
  if (k == 0) {
    throw Error(ErrorCode::kOutOfRange, "k must be a positive integer");
  }
  const auto distances = object_distances(db, query_views, strategy, options);

  std::vector<std::size_t> order(db.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    if (distances[a] != distances[b]) return distances[a] < distances[b];
    return db.object(a).id < db.object(b).id;
  };
  const std::size_t top = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top),
                    order.end(), before);

  RankedList out;
  out.reserve(top);
  for (std::size_t r = 0; r < top; ++r) {
    const auto i = order[r];
    out.push_back({i, db.object(i).id, distances[i]});
  }
  return out;
}

}  // namespace mvs
