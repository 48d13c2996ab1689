#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mvs/feature_vector.hpp"

namespace mvs {

/// The views of one query or one database object.
using ViewSet = std::vector<FeatureVector>;

enum class Strategy {
  kSingle,
  kEfMax,
  kEfAvg,
  kLfMin,
  kLfAvg,
  kLfWavg,
  kLfIwavg,
  kLfMinAvg,
  kLfMinWavg,
};

inline constexpr std::array<Strategy, 9> kAllStrategies = {
    Strategy::kSingle, Strategy::kEfMax,    Strategy::kEfAvg,
    Strategy::kLfMin,  Strategy::kLfAvg,    Strategy::kLfWavg,
    Strategy::kLfIwavg, Strategy::kLfMinAvg, Strategy::kLfMinWavg,
};

/// CLI name, e.g. "lf-min-avg".
std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
/// Same as parse_strategy but throws kUnknownStrategy listing valid names.
Strategy strategy_from_name(std::string_view name);
/// "single, ef-max, ..." in enumeration order.
std::string valid_strategy_names();

bool is_early_fusion(Strategy s) noexcept;
bool is_late_fusion(Strategy s) noexcept;

enum class EarlyFusion { kMax, kAvg };

/// Componentwise max or mean of the views, optionally L2-normalized
/// afterwards. Throws kEmptyViewSet / kDimensionMismatch.
FeatureVector early_fuse(std::span<const FeatureVector> views, EarlyFusion mode,
                         bool renormalize = false);

/// Row-major M x N grid of query-view to object-view distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t rows, std::size_t cols,
                 std::vector<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(entries_).subspan(i * cols_, cols_);
  }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DistanceMatrix pairwise_distances(std::span<const FeatureVector> query,
                                  std::span<const FeatureVector> object);

/// Clamp applied to zero distances before inverting in LF-IWAVG.
inline constexpr double kInverseWeightEpsilon = 1e-9;

struct LateFusionOptions {
  /// LF-MIN-WAVG weights the per-row maximum instead of the row minimum.
  bool literal_min_wavg = false;
};

/// Collapses a distance matrix into one image-set distance. Throws
/// kEmptyMatrix, or kUnknownStrategy for a non-late-fusion strategy other
/// than kSingle (which is treated as LF-MIN).
double late_fuse(const DistanceMatrix& m, Strategy mode,
                 const LateFusionOptions& options = {});

}  // namespace mvs
