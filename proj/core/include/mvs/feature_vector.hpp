#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mvs {

/// Norms below this are treated as degenerate by l2_normalize.
inline constexpr double kZeroNormThreshold = 1e-12;

/// Vectors whose norm is within this distance of 1 are left untouched by
/// ensure_unit_norm, so stored unit vectors survive reload bit-exactly.
inline constexpr double kUnitNormTolerance = 1e-6;

/// Per-view descriptor. Values are stored as f32 (the on-disk precision);
/// every reduction over them accumulates in f64.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<float> values);
  FeatureVector(std::initializer_list<float> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const float> values() const noexcept { return values_; }
  float operator[](std::size_t i) const noexcept { return values_[i]; }

  double norm() const noexcept;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<float> values_;
};

/// Throws kInvalidConfig for an empty or non-finite vector.
void validate_features(std::span<const float> values);

/// Scales to unit Euclidean norm. Throws kZeroVector when the norm is below
/// kZeroNormThreshold.
FeatureVector l2_normalize(const FeatureVector& v);

/// Idempotent variant used on ingestion: returns v unchanged when its norm
/// is already 1 within kUnitNormTolerance, otherwise l2_normalize(v).
FeatureVector ensure_unit_norm(const FeatureVector& v);

/// sqrt(sum (a_i - b_i)^2), accumulated in double. Throws
/// kDimensionMismatch when dims differ.
double euclidean_distance(const FeatureVector& a, const FeatureVector& b);
double euclidean_distance(std::span<const float> a, std::span<const float> b);

double dot(const FeatureVector& a, const FeatureVector& b);

}  // namespace mvs
