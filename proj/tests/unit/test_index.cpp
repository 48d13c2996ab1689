#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "mvs/database.hpp"
#include "mvs/rank.hpp"
#include "oracle.hpp"

using fixtures::error_code;
using mvs::FeatureVector;
using mvs::Strategy;

namespace {

mvs::Manifest two_object_manifest() {
  mvs::Manifest m;
  m.dim = 2;
  m.objects = {{"a", "shoe", {"a/0.jpg", "a/1.jpg"}},
               {"b", "bag", {"b/0.jpg"}}};
  return m;
}

mvs::FeatureFile two_object_features() {
  mvs::FeatureFile f;
  f.dim = 2;
  f.records = {{0, {3.f, 4.f}}, {1, {0.f, 2.f}}, {0, {1.f, 0.f}}};
  return f;
}

}  // namespace

TEST_CASE("build normalizes views and keeps per-object record order") {
  const auto db =
      mvs::Database::build(two_object_manifest(), two_object_features());
  CHECK(db.size() == 2);
  CHECK(db.dim() == 2);
  CHECK(db.view_count() == 3);
  const auto& a = db.object(0);
  CHECK(a.id == "a");
  CHECK(a.category == "shoe");
  REQUIRE(a.views.size() == 2);
  CHECK(a.views[0][0] == doctest::Approx(0.6));
  CHECK(a.views[1] == FeatureVector{1.f, 0.f});
  CHECK(db.object(1).views[0] == FeatureVector{0.f, 1.f});
  CHECK(db.manifest() == two_object_manifest());
}

TEST_CASE("build precomputes early-fusion vectors") {
  std::mt19937_64 rng(1);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 20, 8, 4));
  for (std::size_t i = 0; i < db.size(); ++i) {
    for (auto mode : {mvs::EarlyFusion::kMax, mvs::EarlyFusion::kAvg}) {
      for (bool renorm : {false, true}) {
        CHECK(db.fused(i, mode, renorm) ==
              mvs::early_fuse(db.object(i).views, mode, renorm));
      }
    }
  }
}

TEST_CASE("build rejects malformed inputs") {
  const auto features = two_object_features();

  CHECK(error_code([&] { mvs::Database::build(mvs::Manifest{2, {}}, features); }) ==
        mvs::ErrorCode::kEmptyDatabase);

  auto wrong_dim = two_object_manifest();
  wrong_dim.dim = 3;
  CHECK(error_code([&] { mvs::Database::build(wrong_dim, features); }) ==
        mvs::ErrorCode::kDimensionMismatch);

  auto dup = two_object_manifest();
  dup.objects[1].id = "a";
  CHECK(error_code([&] { mvs::Database::build(dup, features); }) ==
        mvs::ErrorCode::kDuplicateObjectId);

  auto dangling = features;
  dangling.records[1].object_index = 7;
  CHECK(error_code([&] {
          mvs::Database::build(two_object_manifest(), dangling);
        }) == mvs::ErrorCode::kDanglingReference);

  auto missing = features;
  missing.records.pop_back();
  CHECK(error_code([&] {
          mvs::Database::build(two_object_manifest(), missing);
        }) == mvs::ErrorCode::kDanglingReference);

  auto extra = features;
  extra.records.push_back({1, {1.f, 1.f}});
  CHECK(error_code([&] { mvs::Database::build(two_object_manifest(), extra); }) ==
        mvs::ErrorCode::kDanglingReference);

  auto zero = features;
  zero.records[1].values = {0.f, 0.f};
  CHECK(error_code([&] { mvs::Database::build(two_object_manifest(), zero); }) ==
        mvs::ErrorCode::kZeroVector);

  auto no_views = two_object_manifest();
  no_views.objects[1].views.clear();
  CHECK(error_code([&] { mvs::Database::build(no_views, features); }) ==
        mvs::ErrorCode::kEmptyViewSet);
}

TEST_CASE("MVOD-shaped manifest yields 45 categories over 5000 views") {
  mvs::Manifest m;
  m.dim = 4;
  mvs::FeatureFile f;
  f.dim = 4;
  std::mt19937_64 rng(45);
  // 2273 objects: 1000 with 3 views, 1273 with 2 -> 5546; trim to 5000 by
  // giving the first 454 three views and the rest two: 454*3 + 1819*2 = 5000.
  for (std::size_t i = 0; i < 2273; ++i) {
    const std::size_t views = i < 454 ? 3 : 2;
    mvs::ManifestObject obj{"obj" + std::to_string(i),
                            "category" + std::to_string(i % 45), {}};
    for (std::size_t v = 0; v < views; ++v) {
      obj.views.push_back(obj.id + "_" + std::to_string(v) + ".jpg");
      const auto fv = fixtures::random_unit(rng, 4);
      f.records.push_back({i, {fv.values().begin(), fv.values().end()}});
    }
    m.objects.push_back(std::move(obj));
  }
  const auto db = mvs::Database::build(m, f);
  CHECK(db.view_count() == 5000);
  std::set<std::string> categories;
  for (const auto& o : db.objects()) categories.insert(o.category);
  CHECK(categories.size() == 45);
}

TEST_CASE("rank: single-object database returns it at rank 1") {
  std::mt19937_64 rng(2);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 1, 6, 3));
  const auto q = fixtures::random_views(rng, 1, 6);
  for (Strategy s : mvs::kAllStrategies) {
    const auto ranked = mvs::rank(db, q, s, 5);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].object_id == db.object(0).id);
  }
}

TEST_CASE("rank: a query equal to an object's views self-matches under LF-MIN") {
  std::mt19937_64 rng(3);
  const auto objects = fixtures::random_objects(rng, 30, 12, 4);
  const auto db = fixtures::make_database(objects);
  const auto ranked = mvs::rank(db, db.object(17).views, Strategy::kLfMin, 3);
  CHECK(ranked[0].object_id == db.object(17).id);
  CHECK(ranked[0].distance == 0.0);
}

TEST_CASE("rank: ties are broken by ascending object id") {
  std::mt19937_64 rng(4);
  const auto views = fixtures::random_views(rng, 2, 8);
  const auto other = fixtures::random_views(rng, 2, 8);
  // Inserted out of id order on purpose.
  const auto db = fixtures::make_database(
      {{"zeta", "x", views}, {"alpha", "x", views}, {"mid", "y", other},
       {"beta", "x", views}});
  const auto q = fixtures::random_views(rng, 3, 8);
  for (Strategy s : mvs::kAllStrategies) {
    if (s == Strategy::kSingle) continue;
    const auto ranked = mvs::rank(db, q, s, 4);
    std::vector<std::string> tied;
    for (const auto& e : ranked)
      if (e.object_id != "mid") tied.push_back(e.object_id);
    CHECK(tied == std::vector<std::string>{"alpha", "beta", "zeta"});
  }
}

TEST_CASE("rank: errors") {
  std::mt19937_64 rng(5);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 5, 6, 2));
  const auto q = fixtures::random_views(rng, 2, 6);
  CHECK(error_code([&] { mvs::rank(db, q, Strategy::kSingle, 3); }) ==
        mvs::ErrorCode::kInvalidQuery);
  CHECK(error_code([&] { mvs::rank(db, q, Strategy::kLfAvg, 0); }) ==
        mvs::ErrorCode::kOutOfRange);
  const auto wrong = fixtures::random_views(rng, 1, 7);
  CHECK(error_code([&] { mvs::rank(db, wrong, Strategy::kLfAvg, 3); }) ==
        mvs::ErrorCode::kDimensionMismatch);
  CHECK(error_code([&] { mvs::rank(db, mvs::ViewSet{}, Strategy::kEfAvg, 3); }) ==
        mvs::ErrorCode::kEmptyViewSet);
}

TEST_CASE("rank matches the brute-force oracle, including options") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto db = fixtures::make_database(
        fixtures::random_objects(rng, 10 + trial * 4, 4 + trial, 4));
    const auto q = fixtures::random_views(rng, 3, db.dim());
    for (Strategy s : mvs::kAllStrategies) {
      const auto& views = s == Strategy::kSingle ? mvs::ViewSet{q[0]} : q;
      for (bool flag : {false, true}) {
        mvs::RankOptions options;
        options.renormalize_ef = flag;
        options.late.literal_min_wavg = flag;
        const auto got = mvs::rank(db, views, s, 10, options);
        const auto want = oracle::rank(db, views, s, 10, flag, flag);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].object_id == want[i].id);
          CHECK(got[i].distance == doctest::Approx(want[i].distance).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("property: rank output does not depend on thread count") {
  std::mt19937_64 rng(7);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 97, 16, 4));
  const auto q = fixtures::random_views(rng, 3, 16);
  for (Strategy s : mvs::kAllStrategies) {
    const auto& views = s == Strategy::kSingle ? mvs::ViewSet{q[0]} : q;
    const auto serial = mvs::rank(db, views, s, 97);
    for (unsigned threads : {2u, 3u, 8u}) {
      mvs::RankOptions options;
      options.threads = threads;
      CHECK(mvs::rank(db, views, s, 97, options) == serial);
    }
    // Concurrent callers against one database.
    std::vector<mvs::RankedList> results(4);
    {
      std::vector<std::jthread> pool;
      for (auto& r : results)
        pool.emplace_back([&] { r = mvs::rank(db, views, s, 97); });
    }
    for (const auto& r : results) CHECK(r == serial);
  }
}

TEST_CASE("property: truncating a full ranking equals ranking with smaller k") {
  std::mt19937_64 rng(8);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 40, 8, 3));
  const auto q = fixtures::random_views(rng, 2, 8);
  for (Strategy s : mvs::kAllStrategies) {
    if (s == Strategy::kSingle) continue;
    const auto full = mvs::rank(db, q, s, db.size());
    CHECK(full.size() == db.size());
    CHECK(mvs::rank(db, q, s, 1000).size() == db.size());
    for (std::size_t k : {1u, 5u, 17u, 39u}) {
      const mvs::RankedList prefix(full.begin(), full.begin() + k);
      CHECK(mvs::rank(db, q, s, k) == prefix);
    }
    for (std::size_t i = 1; i < full.size(); ++i) {
      CHECK(full[i - 1].distance <= full[i].distance);
    }
  }
}

TEST_CASE("property: single view against single-view objects collapses all strategies") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto db = fixtures::make_database(fixtures::random_objects(rng, 25, 10, 1));
    const auto q = fixtures::random_views(rng, 1, 10);
    const auto reference = mvs::rank(db, q, Strategy::kSingle, 25);
    for (Strategy s : mvs::kAllStrategies) {
      CHECK(mvs::rank(db, q, s, 25) == reference);
    }
  }
}

TEST_CASE("property: duplicating query views") {
  std::mt19937_64 rng(10);
  const auto db = fixtures::make_database(fixtures::random_objects(rng, 30, 12, 4));
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = fixtures::random_views(rng, 1 + trial % 3, 12);

    // One repeated view never changes the minimum.
    auto one = base;
    one.push_back(base[trial % base.size()]);
    CHECK(mvs::object_distances(db, one, Strategy::kLfMin) ==
          mvs::object_distances(db, base, Strategy::kLfMin));

    // Repeating every view leaves all averages where they were.
    auto all = base;
    all.insert(all.end(), base.begin(), base.end());
    for (Strategy s : {Strategy::kLfMin, Strategy::kLfAvg, Strategy::kLfWavg,
                       Strategy::kLfIwavg, Strategy::kLfMinAvg, Strategy::kLfMinWavg}) {
      const auto before = mvs::object_distances(db, base, s);
      const auto after = mvs::object_distances(db, all, s);
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-12));
      }
    }
  }
}
