#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvs/feature_vector.hpp"
#include "mvs/fusion.hpp"

namespace mvs {

/// Object listing as stored in manifest JSON. View entries are image paths;
/// the features themselves live in the MVF1 file.
struct ManifestObject {
  std::string id;
  std::string category;
  std::vector<std::string> views;

  friend bool operator==(const ManifestObject&,
                         const ManifestObject&) = default;
};

struct Manifest {
  std::uint32_t dim = 0;
  std::vector<ManifestObject> objects;

  std::size_t view_count() const noexcept;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// One MVF1 record: a view's features tagged with its object's position in
/// the manifest.
struct FeatureRecord {
  std::uint64_t object_index = 0;
  std::vector<float> values;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct FeatureFile {
  std::uint32_t dim = 0;
  std::vector<FeatureRecord> records;

  friend bool operator==(const FeatureFile&, const FeatureFile&) = default;
};

struct ObjectRecord {
  std::string id;
  std::string category;
  ViewSet views;
  std::vector<std::string> view_paths;
};

/// Immutable multi-view object database. All views are unit-norm and the
/// early-fusion vectors of every object are precomputed at build time.
class Database {
 public:
  /// Throws kEmptyDatabase, kDimensionMismatch, kDanglingReference,
  /// kDuplicateObjectId, kEmptyViewSet or kZeroVector.
  static Database build(const Manifest& manifest, const FeatureFile& features);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return objects_.size(); }
  std::size_t view_count() const noexcept { return view_count_; }
  std::span<const ObjectRecord> objects() const noexcept { return objects_; }
  const ObjectRecord& object(std::size_t i) const { return objects_.at(i); }

  /// Precomputed early_fuse(object(i).views, mode, renormalized).
  const FeatureVector& fused(std::size_t i, EarlyFusion mode,
                             bool renormalized) const;

  Manifest manifest() const;
  /// Records in manifest order, views in stored order.
  FeatureFile features() const;

 private:
  Database() = default;

  std::size_t dim_ = 0;
  std::size_t view_count_ = 0;
  std::vector<ObjectRecord> objects_;
  // Indexed by [max raw, max renormalized, avg raw, avg renormalized].
  std::vector<std::array<FeatureVector, 4>> fused_;
};

struct Query {
  std::string id;
  ViewSet views;
  std::optional<std::string> category;
};

/// Applies ensure_unit_norm to every view.
ViewSet normalize_views(std::span<const FeatureVector> views);

}  // namespace mvs
