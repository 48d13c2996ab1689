#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mvs/database.hpp"
#include "mvs/fusion.hpp"

namespace mvs {

struct RankedEntry {
  std::size_t object_index = 0;
  std::string object_id;
  double distance = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Ascending by distance, ties broken by ascending object id.
using RankedList = std::vector<RankedEntry>;

struct RankOptions {
  /// L2-normalize early-fused vectors (query side and database side).
  bool renormalize_ef = false;
  LateFusionOptions late;
  /// Worker threads for the linear scan; output does not depend on it.
  unsigned threads = 1;
};

/// Fused distance from the query to every database object, in database
/// order. Throws kDimensionMismatch, kEmptyViewSet, or kInvalidQuery when a
/// SINGLE query has more than one view.
std::vector<double> object_distances(const Database& db,
                                     std::span<const FeatureVector> query_views,
                                     Strategy strategy,
                                     const RankOptions& options = {});

/// Top-k of object_distances under the RankedList order. k must be >= 1 and
/// is clamped to the database size.
RankedList rank(const Database& db, std::span<const FeatureVector> query_views,
                Strategy strategy, std::size_t k,
                const RankOptions& options = {});

}  // namespace mvs
