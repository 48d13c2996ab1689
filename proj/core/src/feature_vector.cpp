#include "mvs/feature_vector.hpp"

#include <cmath>
#include <string>

#include "mvs/error.hpp"

namespace mvs {
namespace {

void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimension mismatch: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

}  // namespace

FeatureVector::FeatureVector(std::vector<float> values)
    : values_(std::move(values)) {}

FeatureVector::FeatureVector(std::initializer_list<float> values)
    : values_(values) {}

double FeatureVector::norm() const noexcept {
  double sum = 0.0;
  for (float x : values_) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

void validate_features(std::span<const float> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "feature vector has dim 0");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "non-finite feature value at component " +
                      std::to_string(i));
    }
  }
}

FeatureVector l2_normalize(const FeatureVector& v) {
  const double n = v.norm();
  if (!(n >= kZeroNormThreshold)) {
    throw Error(ErrorCode::kZeroVector,
                "cannot normalize a vector with norm below 1e-12");
  }
  std::vector<float> out(v.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(static_cast<double>(v[i]) / n);
  }
  return FeatureVector(std::move(out));
}

FeatureVector ensure_unit_norm(const FeatureVector& v) {
  if (std::abs(v.norm() - 1.0) <= kUnitNormTolerance) return v;
  return l2_normalize(v);
}

double euclidean_distance(std::span<const float> a, std::span<const float> b) {
  check_same_dim(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
  return euclidean_distance(a.values(), b.values());
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  check_same_dim(a.dim(), b.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += static_cast<double>(a[i]) * b[i];
  }
  return sum;
}

}  // namespace mvs
