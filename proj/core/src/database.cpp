#include "mvs/database.hpp"

#include <unordered_set>

#include "mvs/error.hpp"

namespace mvs {
namespace {

std::size_t fused_slot(EarlyFusion mode, bool renormalized) {
  return (mode == EarlyFusion::kMax ? 0 : 2) + (renormalized ? 1 : 0);
}

}  // namespace

std::size_t Manifest::view_count() const noexcept {
  std::size_t n = 0;
  for (const auto& o : objects) n += o.views.size();
  return n;
}

ViewSet normalize_views(std::span<const FeatureVector> views) {
  ViewSet out;
  out.reserve(views.size());
  for (const auto& v : views) out.push_back(ensure_unit_norm(v));
  return out;
}

Database Database::build(const Manifest& manifest,
                         const FeatureFile& features) {
  if (manifest.objects.empty()) {
    throw Error(ErrorCode::kEmptyDatabase, "manifest lists no objects");
  }
  if (manifest.dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "manifest dim must be positive");
  }
  if (manifest.dim != features.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "manifest dim " + std::to_string(manifest.dim) +
                    " does not match feature file dim " +
                    std::to_string(features.dim));
  }

  Database db;
  db.dim_ = manifest.dim;
  db.objects_.reserve(manifest.objects.size());

  std::unordered_set<std::string> seen;
  for (const auto& entry : manifest.objects) {
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::kDuplicateObjectId,
                  "duplicate object id '" + entry.id + "'");
    }
    if (entry.views.empty()) {
      throw Error(ErrorCode::kEmptyViewSet,
                  "object '" + entry.id + "' has no views");
    }
    ObjectRecord rec;
    rec.id = entry.id;
    rec.category = entry.category;
    rec.view_paths = entry.views;
    rec.views.reserve(entry.views.size());
    db.objects_.push_back(std::move(rec));
  }

  for (std::size_t r = 0; r < features.records.size(); ++r) {
    const auto& record = features.records[r];
    if (record.object_index >= db.objects_.size()) {
      throw Error(ErrorCode::kDanglingReference,
                  "feature record " + std::to_string(r) +
                      " references object index " +
                      std::to_string(record.object_index) +
                      " but the manifest has " +
                      std::to_string(db.objects_.size()) + " objects");
    }
    if (record.values.size() != db.dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature record " + std::to_string(r) + " has " +
                      std::to_string(record.values.size()) + " values");
    }
    validate_features(record.values);
    db.objects_[record.object_index].views.push_back(
        ensure_unit_norm(FeatureVector(record.values)));
  }

  for (const auto& rec : db.objects_) {
    if (rec.views.size() != rec.view_paths.size()) {
      throw Error(ErrorCode::kDanglingReference,
                  "object '" + rec.id + "' lists " +
                      std::to_string(rec.view_paths.size()) +
                      " views in the manifest but has " +
                      std::to_string(rec.views.size()) + " feature records");
    }
    db.view_count_ += rec.views.size();
  }

  db.fused_.reserve(db.objects_.size());
  for (const auto& rec : db.objects_) {
    std::array<FeatureVector, 4> fused;
    for (EarlyFusion mode : {EarlyFusion::kMax, EarlyFusion::kAvg}) {
      FeatureVector raw = early_fuse(rec.views, mode, false);
      // EF-MAX of views pointing away from every axis can be the zero
      // vector; it has no direction, so it stays unnormalized.
      fused[fused_slot(mode, true)] =
          raw.norm() >= kZeroNormThreshold ? l2_normalize(raw) : raw;
      fused[fused_slot(mode, false)] = std::move(raw);
    }
    db.fused_.push_back(std::move(fused));
  }
  return db;
}

const FeatureVector& Database::fused(std::size_t i, EarlyFusion mode,
                                     bool renormalized) const {
  return fused_.at(i)[fused_slot(mode, renormalized)];
}

Manifest Database::manifest() const {
  Manifest m;
  m.dim = static_cast<std::uint32_t>(dim_);
  m.objects.reserve(objects_.size());
  for (const auto& rec : objects_) {
    m.objects.push_back({rec.id, rec.category, rec.view_paths});
  }
  return m;
}

FeatureFile Database::features() const {
  FeatureFile f;
  f.dim = static_cast<std::uint32_t>(dim_);
  f.records.reserve(view_count_);
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    for (const auto& v : objects_[i].views) {
      f.records.push_back(
          {i, std::vector<float>(v.values().begin(), v.values().end())});
    }
  }
  return f;
}

}  // namespace mvs
