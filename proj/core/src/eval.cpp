#include "mvs/eval.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "mvs/error.hpp"

namespace mvs {

std::string_view ap_mode_name(ApMode mode) {
  return mode == ApMode::kPaper ? "paper" : "standard";
}

std::optional<ApMode> parse_ap_mode(std::string_view name) {
  if (name == "paper") return ApMode::kPaper;
  if (name == "standard") return ApMode::kStandard;
  return std::nullopt;
}

double precision_at_k(std::span<const std::uint8_t> rels, std::size_t k) {
  if (k == 0 || k > rels.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "precision rank " + std::to_string(k) +
                    " outside a list of length " + std::to_string(rels.size()));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += rels[i] != 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(std::span<const std::uint8_t> rels, ApMode mode) {
  if (rels.empty()) {
    throw Error(ErrorCode::kEmptyList, "average precision of an empty list");
  }
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= rels.size(); ++k) {
    if (rels[k - 1] == 0) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k);
  }
  if (mode == ApMode::kPaper) return sum / static_cast<double>(rels.size());
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

std::vector<double> interpolated_precision(std::span<const std::uint8_t> rels) {
  std::vector<double> out(rels.size());
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= rels.size(); ++k) {
    hits += rels[k - 1] != 0;
    out[k - 1] = static_cast<double>(hits) / static_cast<double>(k);
  }
  for (std::size_t i = out.size(); i-- > 1;) {
    out[i - 1] = std::max(out[i - 1], out[i]);
  }
  return out;
}

namespace {

std::vector<CurvePoint> mean_curve(std::span<const std::vector<double>> curves) {
  if (curves.empty()) {
    throw Error(ErrorCode::kEmptyList, "no precision curves to average");
  }
  const std::size_t len = curves.front().size();
  std::vector<double> sum(len, 0.0);
  for (const auto& c : curves) {
    if (c.size() != len) {
      throw Error(ErrorCode::kLengthMismatch,
                  "precision curves of lengths " + std::to_string(len) +
                      " and " + std::to_string(c.size()));
    }
    for (std::size_t i = 0; i < len; ++i) sum[i] += c[i];
  }
  std::vector<CurvePoint> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = {i + 1, sum[i] / static_cast<double>(curves.size())};
  }
  return out;
}

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

struct Scored {
  double average_precision = 0.0;
  double seconds = 0.0;
  std::vector<double> curve;
};

}  // namespace

std::vector<CurvePoint> interpolated_curve(std::span<const Relevance> per_query) {
  std::vector<std::vector<double>> curves;
  curves.reserve(per_query.size());
  for (const auto& rels : per_query) curves.push_back(interpolated_precision(rels));
  return mean_curve(curves);
}

Relevance judge(const Database& db, const RankedList& ranked,
                std::string_view category) {
  Relevance rels;
  rels.reserve(ranked.size());
  for (const auto& entry : ranked) {
    rels.push_back(db.object(entry.object_index).category == category ? 1 : 0);
  }
  return rels;
}

const StrategySummary& EvalReport::summary(Strategy s) const {
  for (const auto& entry : strategies) {
    if (entry.strategy == s) return entry;
  }
  throw Error(ErrorCode::kUnknownStrategy,
              "strategy '" + std::string(strategy_name(s)) +
                  "' was not evaluated");
}

EvalReport evaluate(const Database& db, std::span<const Query> queries,
                    std::span<const Strategy> strategies,
                    const EvalOptions& options) {
  for (const auto& q : queries) {
    if (!q.category) {
      throw Error(ErrorCode::kMissingGroundTruth,
                  "query '" + q.id + "' has no ground-truth category");
    }
    if (q.views.empty()) {
      throw Error(ErrorCode::kEmptyViewSet, "query '" + q.id + "' has no views");
    }
    for (const auto& v : q.views) {
      if (v.dim() != db.dim()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "query '" + q.id + "' has dim " + std::to_string(v.dim()) +
                        ", index expects dim " + std::to_string(db.dim()));
      }
    }
  }
  if (queries.empty()) {
    throw Error(ErrorCode::kEmptyList, "no queries to evaluate");
  }
  const std::size_t k =
      options.k == 0 ? db.size() : std::min(options.k, db.size());

  const auto score = [&](const Query& q, Strategy strategy) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    Scored out;
    if (strategy == Strategy::kSingle) {
      std::vector<double> aps;
      std::vector<std::vector<double>> curves;
      for (const auto& view : q.views) {
        const auto ranked = rank(db, std::span(&view, 1), strategy, k, options.rank);
        const auto rels = judge(db, ranked, *q.category);
        aps.push_back(average_precision(rels, options.ap_mode));
        curves.push_back(interpolated_precision(rels));
      }
      out.average_precision = mean_of(aps);
      for (const auto& p : mean_curve(curves)) out.curve.push_back(p.precision);
    } else {
      const auto ranked = rank(db, q.views, strategy, k, options.rank);
      const auto rels = judge(db, ranked, *q.category);
      out.average_precision = average_precision(rels, options.ap_mode);
      out.curve = interpolated_precision(rels);
    }
    if (options.timing) {
      out.seconds =
          std::chrono::duration<double>(Clock::now() - start).count();
    }
    return out;
  };

  // Results land in fixed slots, so report assembly is independent of the
  // order in which workers finish.
  const std::size_t jobs = strategies.size() * queries.size();
  std::vector<Scored> results(jobs);
  const auto run = [&](std::size_t job) {
    results[job] = score(queries[job % queries.size()],
                         strategies[job / queries.size()]);
  };
  const unsigned workers = std::max(1u, options.threads);
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) run(j);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t j = w; j < jobs; j += workers) run(j);
      });
    }
  }

  EvalReport report;
  report.ap_mode = options.ap_mode;
  report.k = k;
  report.timed = options.timing;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    StrategySummary summary;
    summary.strategy = strategies[s];
    std::vector<double> aps;
    std::vector<double> seconds;
    std::vector<std::vector<double>> curves;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      auto& r = results[s * queries.size() + q];
      report.per_query.push_back(
          {queries[q].id, strategies[s], r.average_precision, r.seconds});
      aps.push_back(r.average_precision);
      seconds.push_back(r.seconds);
      curves.push_back(std::move(r.curve));
    }
    summary.mean_average_precision = mean_of(aps);
    summary.mean_query_seconds = mean_of(seconds);
    summary.curve = mean_curve(curves);
    report.strategies.push_back(std::move(summary));
  }
  return report;
}

}  // namespace mvs
