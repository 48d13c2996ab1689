#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvs/database.hpp"

namespace mvs {

/// Knobs for the synthetic multi-view dataset.
///
/// Category centroids are unit vectors whose pairwise distance equals
/// category_separation (exactly when num_categories < dim, in expectation
/// otherwise). Each object centroid sits at distance object_spread from its
/// category centroid in a uniformly random direction. Each view adds
/// isotropic Gaussian noise with per-component sigma view_noise_sigma /
/// sqrt(dim), so the sigmas are expected noise norms independent of dim.
/// Query views get a further clutter_sigma of the same kind. All views are
/// L2-normalized.
struct SynthConfig {
  std::size_t num_categories = 45;
  std::size_t objects_per_category = 5;
  /// Held-out objects per category, each becoming one multi-view query.
  std::size_t queries_per_category = 1;
  std::size_t views_min = 3;
  std::size_t views_max = 5;
  std::size_t dim = 64;
  double category_separation = 1.0;
  double object_spread = 0.5;
  double view_noise_sigma = 0.5;
  double clutter_sigma = 0.0;
  std::uint64_t seed = 1;
};

/// Throws kInvalidConfig. category_separation must lie in (0, sqrt(2)].
void validate(const SynthConfig& config);

SynthConfig synth_config_from_json(std::string_view json);
std::string synth_config_to_json(const SynthConfig& config);

struct SynthDataset {
  Manifest manifest;
  FeatureFile features;
  std::vector<Query> queries;
};

/// Pure function of the config.
SynthDataset generate(const SynthConfig& config);

/// Writes manifest.json, features.mvf, queries/queries.json and one
/// queries/<id>.mvf per query under dir.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace mvs
