#include "mvs/fusion.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mvs/error.hpp"

namespace mvs {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kSingle: return "single";
    case Strategy::kEfMax: return "ef-max";
    case Strategy::kEfAvg: return "ef-avg";
    case Strategy::kLfMin: return "lf-min";
    case Strategy::kLfAvg: return "lf-avg";
    case Strategy::kLfWavg: return "lf-wavg";
    case Strategy::kLfIwavg: return "lf-iwavg";
    case Strategy::kLfMinAvg: return "lf-min-avg";
    case Strategy::kLfMinWavg: return "lf-min-wavg";
  }
  return "";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string valid_strategy_names() {
  std::string out;
  for (Strategy s : kAllStrategies) {
    if (!out.empty()) out += ", ";
    out += strategy_name(s);
  }
  return out;
}

Strategy strategy_from_name(std::string_view name) {
  if (auto s = parse_strategy(name)) return *s;
  throw Error(ErrorCode::kUnknownStrategy,
              "unknown strategy '" + std::string(name) +
                  "'; valid strategies: " + valid_strategy_names());
}

bool is_early_fusion(Strategy s) noexcept {
  return s == Strategy::kEfMax || s == Strategy::kEfAvg;
}

bool is_late_fusion(Strategy s) noexcept {
  return s != Strategy::kSingle && !is_early_fusion(s);
}

FeatureVector early_fuse(std::span<const FeatureVector> views, EarlyFusion mode,
                         bool renormalize) {
  if (views.empty()) {
    throw Error(ErrorCode::kEmptyViewSet, "early fusion of an empty view set");
  }
  const std::size_t dim = views.front().dim();
  for (const auto& v : views) {
    if (v.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "views of differing dimension in one view set");
    }
  }

  std::vector<float> out(dim);
  if (mode == EarlyFusion::kMax) {
    for (std::size_t i = 0; i < dim; ++i) {
      float m = views.front()[i];
      for (const auto& v : views.subspan(1)) m = std::max(m, v[i]);
      out[i] = m;
    }
  } else {
    const double count = static_cast<double>(views.size());
    for (std::size_t i = 0; i < dim; ++i) {
      double sum = 0.0;
      for (const auto& v : views) sum += v[i];
      out[i] = static_cast<float>(sum / count);
    }
  }
  FeatureVector fused(std::move(out));
  return renormalize ? l2_normalize(fused) : fused;
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols,
                               std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kLengthMismatch,
                "distance matrix entry count does not match its shape");
  }
}

DistanceMatrix pairwise_distances(std::span<const FeatureVector> query,
                                  std::span<const FeatureVector> object) {
  std::vector<double> entries;
  entries.reserve(query.size() * object.size());
  for (const auto& q : query) {
    for (const auto& o : object) entries.push_back(euclidean_distance(q, o));
  }
  return DistanceMatrix(query.size(), object.size(), std::move(entries));
}

namespace {

double min_entry(std::span<const double> xs) {
  return *std::min_element(xs.begin(), xs.end());
}

double mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// sum_i x_i * w_i with w_i = x_i / sum x. The weights are formed
// explicitly so a lone entry gets weight exactly 1 and fuses to itself.
double self_weighted_mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  if (sum <= 0.0) return 0.0;
  double out = 0.0;
  for (double x : xs) out += x * (x / sum);
  return out;
}

// Weights are normalized inverse distances; the clamp keeps an exact
// duplicate (distance 0) finite while letting it dominate.
double inverse_weighted_mean(std::span<const double> xs) {
  double inv_sum = 0.0;
  for (double x : xs) inv_sum += 1.0 / std::max(x, kInverseWeightEpsilon);
  double out = 0.0;
  for (double x : xs) {
    out += x * ((1.0 / std::max(x, kInverseWeightEpsilon)) / inv_sum);
  }
  return out;
}

}  // namespace

double late_fuse(const DistanceMatrix& m, Strategy mode,
                 const LateFusionOptions& options) {
  if (m.empty()) {
    throw Error(ErrorCode::kEmptyMatrix, "late fusion of an empty matrix");
  }
  switch (mode) {
    case Strategy::kSingle:
    case Strategy::kLfMin:
      return min_entry(m.entries());
    case Strategy::kLfAvg:
      return mean(m.entries());
    case Strategy::kLfWavg:
      return self_weighted_mean(m.entries());
    case Strategy::kLfIwavg:
      return inverse_weighted_mean(m.entries());
    case Strategy::kLfMinAvg:
    case Strategy::kLfMinWavg: {
      std::vector<double> per_row(m.rows());
      for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        per_row[i] = (mode == Strategy::kLfMinWavg && options.literal_min_wavg)
                         ? *std::max_element(row.begin(), row.end())
                         : min_entry(row);
      }
      return mode == Strategy::kLfMinAvg ? mean(per_row)
                                         : self_weighted_mean(per_row);
    }
    case Strategy::kEfMax:
    case Strategy::kEfAvg:
      break;
  }
  throw Error(ErrorCode::kUnknownStrategy,
              std::string(strategy_name(mode)) + " is not a late-fusion mode");
}

}  // namespace mvs
