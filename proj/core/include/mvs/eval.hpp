#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvs/database.hpp"
#include "mvs/rank.hpp"

namespace mvs {

/// One relevance flag (0 or 1) per rank of a result list.
using Relevance = std::vector<std::uint8_t>;

/// kPaper divides the precision sum by the result-list length; kStandard
/// divides by the number of relevant items in the list.
enum class ApMode { kPaper, kStandard };

std::string_view ap_mode_name(ApMode mode);
std::optional<ApMode> parse_ap_mode(std::string_view name);

/// Fraction of relevant items among the first k. Throws kOutOfRange unless
/// 1 <= k <= rels.size().
double precision_at_k(std::span<const std::uint8_t> rels, std::size_t k);

/// sum_k P(k) * rel(k), normalized per mode. Throws kEmptyList. A standard
/// mode list with no relevant items scores 0.
double average_precision(std::span<const std::uint8_t> rels,
                         ApMode mode = ApMode::kPaper);

/// P_interp(k) = max_{k' >= k} P(k') for k = 1..rels.size().
std::vector<double> interpolated_precision(std::span<const std::uint8_t> rels);

struct CurvePoint {
  std::size_t rank = 0;
  double precision = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Mean over queries of interpolated_precision. Throws kLengthMismatch when
/// lists differ in length, kEmptyList when there are none.
std::vector<CurvePoint> interpolated_curve(std::span<const Relevance> per_query);

/// rel(k) = ranked[k].category == category.
Relevance judge(const Database& db, const RankedList& ranked,
                std::string_view category);

struct EvalOptions {
  /// Result-list length; 0 means the whole database.
  std::size_t k = 0;
  ApMode ap_mode = ApMode::kPaper;
  RankOptions rank;
  /// Queries evaluated concurrently.
  unsigned threads = 1;
  bool timing = true;
};

struct QueryResult {
  std::string query_id;
  Strategy strategy = Strategy::kSingle;
  double average_precision = 0.0;
  double seconds = 0.0;
};

struct StrategySummary {
  Strategy strategy = Strategy::kSingle;
  double mean_average_precision = 0.0;
  double mean_query_seconds = 0.0;
  std::vector<CurvePoint> curve;
};

struct EvalReport {
  ApMode ap_mode = ApMode::kPaper;
  std::size_t k = 0;
  bool timed = true;
  std::vector<StrategySummary> strategies;
  /// Grouped by strategy (in request order), then by query order.
  std::vector<QueryResult> per_query;

  const StrategySummary& summary(Strategy s) const;
};

/// Ranks every query under every strategy and scores the results by
/// category equality. Under SINGLE, each view of a query is issued as its own
/// single-view query and the per-view AveP values (and curves) are averaged
/// into the query's score. Throws kMissingGroundTruth.
EvalReport evaluate(const Database& db, std::span<const Query> queries,
                    std::span<const Strategy> strategies,
                    const EvalOptions& options = {});

}  // namespace mvs
