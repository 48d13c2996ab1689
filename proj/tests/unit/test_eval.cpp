#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mvs/eval.hpp"
#include "mvs/report.hpp"
#include "oracle.hpp"

using fixtures::error_code;
using mvs::ApMode;
using mvs::Relevance;
using mvs::Strategy;

namespace {

mvs::FeatureVector at_degrees(double deg) {
  const double r = deg * std::numbers::pi / 180.0;
  return mvs::FeatureVector{static_cast<float>(std::cos(r)),
                            static_cast<float>(std::sin(r))};
}

fixtures::Object arc_object(const std::string& id, const std::string& cat,
                            double deg) {
  return {id, cat, {at_degrees(deg), at_degrees(deg + 2)}};
}

// Objects on the unit circle; under LF-MIN the query (A0's own views) ranks
// them A0, A10, B15, A20, B90, B100.
mvs::Database arc_database() {
  return fixtures::make_database({arc_object("A0", "A", 0),
                                  arc_object("A10", "A", 10),
                                  arc_object("A20", "A", 20),
                                  arc_object("B15", "B", 15),
                                  arc_object("B90", "B", 90),
                                  arc_object("B100", "B", 100)});
}

}  // namespace

TEST_CASE("precision_at_k") {
  const Relevance rels{1, 0, 1};
  CHECK(mvs::precision_at_k(rels, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(mvs::precision_at_k(rels, 1) == 1.0);
  CHECK(mvs::precision_at_k(rels, 2) == 0.5);
  const Relevance all(7, 1), none(7, 0);
  for (std::size_t k = 1; k <= 7; ++k) {
    CHECK(mvs::precision_at_k(all, k) == 1.0);
    CHECK(mvs::precision_at_k(none, k) == 0.0);
  }
  CHECK(error_code([&] { mvs::precision_at_k(rels, 0); }) ==
        mvs::ErrorCode::kOutOfRange);
  CHECK(error_code([&] { mvs::precision_at_k(rels, 4); }) ==
        mvs::ErrorCode::kOutOfRange);
}

TEST_CASE("average_precision examples") {
  CHECK(mvs::average_precision(Relevance{1, 0, 1}) ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(mvs::average_precision(Relevance{1, 0, 1}, ApMode::kStandard) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(mvs::average_precision(Relevance{1, 1, 1, 1}) == 1.0);
  CHECK(mvs::average_precision(Relevance{1, 1, 1, 1}, ApMode::kStandard) == 1.0);
  CHECK(mvs::average_precision(Relevance{0, 0, 0}) == 0.0);
  CHECK(mvs::average_precision(Relevance{0, 0, 0}, ApMode::kStandard) == 0.0);
  CHECK(error_code([] { mvs::average_precision(Relevance{}); }) ==
        mvs::ErrorCode::kEmptyList);
}

TEST_CASE("property: appending an irrelevant item lowers paper-mode AveP") {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    Relevance rels(1 + trial % 20);
    for (auto& r : rels) r = coin(rng);
    rels[0] = 1;
    const double before = mvs::average_precision(rels);
    const double before_std = mvs::average_precision(rels, ApMode::kStandard);
    rels.push_back(0);
    CHECK(mvs::average_precision(rels) < before);
    // Standard mode ignores trailing irrelevant items entirely.
    CHECK(mvs::average_precision(rels, ApMode::kStandard) == before_std);
    // Paper mode is exactly the precision sum over the list length.
    const double sum = before * static_cast<double>(rels.size() - 1);
    CHECK(mvs::average_precision(rels) ==
          doctest::Approx(sum / static_cast<double>(rels.size())));
  }
}

TEST_CASE("interpolated precision curves") {
  const Relevance rels{1, 0, 1};
  const auto single = mvs::interpolated_curve(std::vector<Relevance>{rels});
  REQUIRE(single.size() == 3);
  CHECK(single[0] == mvs::CurvePoint{1, 1.0});
  CHECK(single[1].rank == 2);
  CHECK(single[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(single[2].precision == doctest::Approx(2.0 / 3.0));

  const auto twice = mvs::interpolated_curve(std::vector<Relevance>{rels, rels});
  CHECK(twice == single);

  const auto perfect = mvs::interpolated_curve(
      std::vector<Relevance>{Relevance(5, 1), Relevance(5, 1)});
  for (const auto& p : perfect) CHECK(p.precision == 1.0);

  CHECK(error_code([] {
          mvs::interpolated_curve(std::vector<Relevance>{{1, 0}, {1}});
        }) == mvs::ErrorCode::kLengthMismatch);
  CHECK(error_code([] { mvs::interpolated_curve(std::vector<Relevance>{}); }) ==
        mvs::ErrorCode::kEmptyList);
}

TEST_CASE("property: interpolated precision is a non-increasing upper envelope") {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    Relevance rels(1 + trial % 30);
    for (auto& r : rels) r = coin(rng);
    const auto curve = mvs::interpolated_precision(rels);
    for (std::size_t k = 1; k <= rels.size(); ++k) {
      CHECK(curve[k - 1] >= mvs::precision_at_k(rels, k));
      if (k > 1) CHECK(curve[k - 1] <= curve[k - 2]);
      double best = 0.0;
      for (std::size_t j = k; j <= rels.size(); ++j)
        best = std::max(best, mvs::precision_at_k(rels, j));
      CHECK(curve[k - 1] == best);
    }
  }
}

TEST_CASE("evaluate reproduces a hand-computed ranking") {
  const auto db = arc_database();
  const std::vector<mvs::Query> queries = {
      {"qA", db.object(0).views, std::string("A")}};

  // rels 1,1,0,1,0,0: precision sum 1 + 1 + 3/4.
  const std::vector<Strategy> strategies{Strategy::kLfMin, Strategy::kSingle};
  mvs::EvalOptions paper;
  paper.timing = false;
  const auto report = mvs::evaluate(db, queries, strategies, paper);
  CHECK(report.k == 6);
  CHECK(report.summary(Strategy::kLfMin).mean_average_precision ==
        doctest::Approx(2.75 / 6.0).epsilon(1e-14));
  CHECK(report.summary(Strategy::kSingle).mean_average_precision ==
        doctest::Approx(2.75 / 6.0).epsilon(1e-14));

  mvs::EvalOptions standard = paper;
  standard.ap_mode = ApMode::kStandard;
  CHECK(mvs::evaluate(db, queries, strategies, standard)
            .summary(Strategy::kLfMin)
            .mean_average_precision == doctest::Approx(2.75 / 3.0).epsilon(1e-14));

  // Same number from the scalar oracle ranking and the textbook AveP.
  const auto hits = oracle::rank(db, queries[0].views, Strategy::kLfMin, 6);
  Relevance rels;
  for (const auto& h : hits) rels.push_back(h.id[0] == 'A');
  CHECK(rels == Relevance{1, 1, 0, 1, 0, 0});
  CHECK(oracle::textbook_ap(rels) == doctest::Approx(2.75 / 3.0));

  // A shorter result list changes the paper-mode denominator.
  paper.k = 4;
  CHECK(mvs::evaluate(db, queries, strategies, paper)
            .summary(Strategy::kLfMin)
            .mean_average_precision == doctest::Approx(2.75 / 4.0));
}

TEST_CASE("evaluate: one shared category scores 1 in standard mode") {
  std::mt19937_64 rng(3);
  auto objects = fixtures::random_objects(rng, 15, 8, 3, 1);
  const auto db = fixtures::make_database(objects);
  std::vector<mvs::Query> queries;
  for (int i = 0; i < 4; ++i) {
    queries.push_back({"q" + std::to_string(i), fixtures::random_views(rng, 3, 8),
                       std::string("c0")});
  }
  mvs::EvalOptions options;
  options.ap_mode = ApMode::kStandard;
  const auto report = mvs::evaluate(
      db, queries,
      std::vector<Strategy>(mvs::kAllStrategies.begin(), mvs::kAllStrategies.end()),
      options);
  CHECK(report.strategies.size() == 9);
  CHECK(report.per_query.size() == 36);
  for (const auto& s : report.strategies) {
    CHECK(s.mean_average_precision == 1.0);
    CHECK(s.curve.size() == db.size());
  }
}

TEST_CASE("evaluate: mAP is the plain mean of per-query AveP and lies in [0, 1]") {
  std::mt19937_64 rng(4);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 30, 8, 3, 4));
  std::vector<mvs::Query> queries;
  for (int i = 0; i < 7; ++i) {
    queries.push_back({"q" + std::to_string(i),
                       fixtures::random_views(rng, 1 + i % 4, 8),
                       "c" + std::to_string(i % 4)});
  }
  const std::vector<Strategy> all(mvs::kAllStrategies.begin(),
                                  mvs::kAllStrategies.end());
  for (ApMode mode : {ApMode::kPaper, ApMode::kStandard}) {
    mvs::EvalOptions options;
    options.ap_mode = mode;
    options.k = 12;
    const auto report = mvs::evaluate(db, queries, all, options);
    for (const auto& s : report.strategies) {
      double sum = 0.0;
      int n = 0;
      for (const auto& r : report.per_query) {
        if (r.strategy != s.strategy) continue;
        CHECK(r.average_precision >= 0.0);
        CHECK(r.average_precision <= 1.0);
        sum += r.average_precision;
        ++n;
      }
      CHECK(n == 7);
      CHECK(s.mean_average_precision == sum / n);
      CHECK(s.curve.size() == 12);
      for (const auto& p : s.curve) {
        CHECK(p.precision >= 0.0);
        CHECK(p.precision <= 1.0);
      }
    }
  }
}

TEST_CASE("evaluate: SINGLE averages independent per-view queries") {
  std::mt19937_64 rng(5);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 20, 6, 3, 3));
  const mvs::Query q{"q", fixtures::random_views(rng, 3, 6), std::string("c1")};
  mvs::EvalOptions options;
  options.timing = false;
  const auto report = mvs::evaluate(db, std::vector<mvs::Query>{q},
                                    std::vector<Strategy>{Strategy::kSingle}, options);
  double expected = 0.0;
  for (const auto& v : q.views) {
    const auto ranked = mvs::rank(db, mvs::ViewSet{v}, Strategy::kSingle, db.size());
    expected += mvs::average_precision(mvs::judge(db, ranked, "c1"));
  }
  CHECK(report.per_query.at(0).average_precision ==
        doctest::Approx(expected / 3.0).epsilon(1e-15));
}

TEST_CASE("evaluate: pure up to timing and independent of thread count") {
  std::mt19937_64 rng(6);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 25, 8, 3, 5));
  std::vector<mvs::Query> queries;
  for (int i = 0; i < 6; ++i) {
    queries.push_back({"q" + std::to_string(i), fixtures::random_views(rng, 2, 8),
                       "c" + std::to_string(i % 5)});
  }
  const std::vector<Strategy> all(mvs::kAllStrategies.begin(),
                                  mvs::kAllStrategies.end());
  mvs::EvalOptions options;
  options.timing = false;
  const auto a = mvs::evaluate(db, queries, all, options);
  options.threads = 3;
  const auto b = mvs::evaluate(db, queries, all, options);
  CHECK(mvs::map_csv(a) == mvs::map_csv(b));
  CHECK(mvs::per_query_csv(a) == mvs::per_query_csv(b));
  for (std::size_t s = 0; s < a.strategies.size(); ++s) {
    CHECK(a.strategies[s].curve == b.strategies[s].curve);
  }
}

TEST_CASE("evaluate: errors") {
  const auto db = arc_database();
  const std::vector<Strategy> lf{Strategy::kLfAvg};
  CHECK(error_code([&] {
          mvs::evaluate(db, std::vector<mvs::Query>{{"q", db.object(0).views, {}}}, lf);
        }) == mvs::ErrorCode::kMissingGroundTruth);
  CHECK(error_code([&] {
          mvs::evaluate(db, std::vector<mvs::Query>{
                                {"q", {mvs::FeatureVector{1.f, 0.f, 0.f}}, "A"}},
                        lf);
        }) == mvs::ErrorCode::kDimensionMismatch);
  CHECK(error_code([&] { mvs::evaluate(db, std::vector<mvs::Query>{}, lf); }) ==
        mvs::ErrorCode::kEmptyList);
}

TEST_CASE("report CSVs use six decimals and fixed columns") {
  const auto db = arc_database();
  const std::vector<mvs::Query> queries = {{"qA", db.object(0).views, "A"}};
  mvs::EvalOptions options;
  options.timing = false;
  const auto report = mvs::evaluate(
      db, queries, std::vector<Strategy>{Strategy::kLfMin, Strategy::kEfAvg}, options);

  const auto map = mvs::map_csv(report);
  CHECK(map.rfind("strategy,mode,mAP,mean_query_seconds\nlf-min,paper,0.458333,NA\n", 0) == 0);
  CHECK(mvs::per_query_csv(report).rfind("query_id,strategy,AveP\nqA,lf-min,0.458333\n", 0) == 0);
  CHECK(mvs::curve_csv(report.strategies[0]) ==
        "k,mean_interpolated_precision\n1,1.000000\n2,1.000000\n3,0.750000\n"
        "4,0.750000\n5,0.600000\n6,0.500000\n");

  fixtures::TempDir dir("report");
  mvs::write_report(report, dir / "out");
  for (const char* f : {"map.csv", "per_query.csv", "curve_lf-min.csv", "curve_ef-avg.csv"}) {
    CHECK(std::filesystem::exists(dir / ("out/" + std::string(f))));
  }
  CHECK(mvs::format_fixed6(1.0 / 3.0) == "0.333333");
}
