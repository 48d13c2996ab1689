#include "mvs/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "json.hpp"
#include "mvs/error.hpp"
#include "mvs/formats.hpp"

namespace mvs {
namespace {

// mt19937_64 output is fixed by the C++ standard; the distributions in
// <random> are not, so the conversions to uniform, integer and Gaussian
// draws are written out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits into [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Inclusive range, rejection sampled.
  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<std::size_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::size_t>(x % span);
  }

  // Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::vector<double> gaussian(std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = normal();
    return v;
  }

  std::vector<double> unit_direction(std::size_t dim) {
    for (;;) {
      auto v = gaussian(dim);
      double n = 0.0;
      for (double x : v) n += x * x;
      n = std::sqrt(n);
      if (n < 1e-12) continue;
      for (auto& x : v) x /= n;
      return v;
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double norm_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Modified Gram-Schmidt, in place. Vectors are assumed independent, which
// holds almost surely for Gaussian draws with count <= dim.
void orthonormalize(std::vector<std::vector<double>>& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < basis[i].size(); ++c) {
        d += basis[i][c] * basis[j][c];
      }
      for (std::size_t c = 0; c < basis[i].size(); ++c) {
        basis[i][c] -= d * basis[j][c];
      }
    }
    const double n = norm_of(basis[i]);
    for (auto& x : basis[i]) x /= n;
  }
}

FeatureVector noisy_view(const std::vector<double>& center, double sigma,
                         double clutter, Rng& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(center.size()));
  // Clutter draws are consumed even at zero clutter so the database stays
  // identical when only clutter_sigma changes.
  std::vector<float> v(center.size());
  for (std::size_t c = 0; c < center.size(); ++c) {
    const double noise = sigma * rng.normal();
    const double extra = clutter * rng.normal();
    v[c] = static_cast<float>(center[c] + scale * (noise + extra));
  }
  return l2_normalize(FeatureVector(std::move(v)));
}

std::string numbered(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

}  // namespace

void validate(const SynthConfig& c) {
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, "invalid synth config: " + why);
  };
  if (c.num_categories == 0) fail("num_categories must be >= 1");
  if (c.objects_per_category == 0) fail("objects_per_category must be >= 1");
  if (c.views_min == 0) fail("views_min must be >= 1");
  if (c.views_max < c.views_min) fail("views_max must be >= views_min");
  if (c.dim == 0) fail("dim must be >= 1");
  if (!(c.category_separation > 0.0) ||
      c.category_separation > std::numbers::sqrt2) {
    fail("category_separation must be in (0, sqrt(2)]");
  }
  for (double sigma : {c.object_spread, c.view_noise_sigma, c.clutter_sigma}) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      fail("sigmas must be finite and >= 0");
    }
  }
}

namespace {

std::uint64_t unsigned_field(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_unsigned()) {
    throw Error(ErrorCode::kInvalidConfig, "'" + key + "' must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

double number_field(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) throw Error(ErrorCode::kInvalidConfig, "'" + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

SynthConfig synth_config_from_json(std::string_view text) {
  using nlohmann::json;
  SynthConfig c;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) {
      throw Error(ErrorCode::kInvalidConfig, "synth config must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
      if (key == "num_categories") c.num_categories = unsigned_field(value, key);
      else if (key == "objects_per_category") c.objects_per_category = unsigned_field(value, key);
      else if (key == "queries_per_category") c.queries_per_category = unsigned_field(value, key);
      else if (key == "views_min") c.views_min = unsigned_field(value, key);
      else if (key == "views_max") c.views_max = unsigned_field(value, key);
      else if (key == "dim") c.dim = unsigned_field(value, key);
      else if (key == "category_separation") c.category_separation = number_field(value, key);
      else if (key == "object_spread") c.object_spread = number_field(value, key);
      else if (key == "view_noise_sigma") c.view_noise_sigma = number_field(value, key);
      else if (key == "clutter_sigma") c.clutter_sigma = number_field(value, key);
      else if (key == "seed") c.seed = unsigned_field(value, key);
      else throw Error(ErrorCode::kInvalidConfig, "unknown synth config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("invalid synth config JSON: ") + e.what());
  }
  validate(c);
  return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
  nlohmann::json doc = {
      {"num_categories", c.num_categories},
      {"objects_per_category", c.objects_per_category},
      {"queries_per_category", c.queries_per_category},
      {"views_min", c.views_min},
      {"views_max", c.views_max},
      {"dim", c.dim},
      {"category_separation", c.category_separation},
      {"object_spread", c.object_spread},
      {"view_noise_sigma", c.view_noise_sigma},
      {"clutter_sigma", c.clutter_sigma},
      {"seed", c.seed},
  };
  return doc.dump(2);
}

SynthDataset generate(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const std::size_t dim = config.dim;

  // Mixing every unit direction with a shared offset of weight `lift`
  // shrinks the sqrt(2) distance between orthonormal directions down to the
  // requested separation: |u_i - u_j| / sqrt(1 + lift^2) = separation.
  const double sep = config.category_separation;
  const double lift = std::sqrt(std::max(0.0, 2.0 / (sep * sep) - 1.0));
  std::vector<std::vector<double>> directions;
  directions.reserve(config.num_categories + 1);
  for (std::size_t i = 0; i <= config.num_categories; ++i) {
    directions.push_back(rng.unit_direction(dim));
  }
  if (config.num_categories + 1 <= dim) orthonormalize(directions);
  const auto& shared = directions.back();

  std::vector<std::vector<double>> centroids(config.num_categories);
  for (std::size_t cat = 0; cat < config.num_categories; ++cat) {
    auto& c = centroids[cat];
    c.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      c[i] = directions[cat][i] + lift * shared[i];
    }
    const double n = norm_of(c);
    for (auto& x : c) x /= n;
  }

  SynthDataset out;
  out.manifest.dim = static_cast<std::uint32_t>(dim);
  out.features.dim = static_cast<std::uint32_t>(dim);

  const std::size_t per_category =
      config.objects_per_category + config.queries_per_category;
  for (std::size_t cat = 0; cat < config.num_categories; ++cat) {
    const std::string category = numbered("cat", cat, 3);
    for (std::size_t obj = 0; obj < per_category; ++obj) {
      auto center = rng.unit_direction(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        center[i] = centroids[cat][i] + config.object_spread * center[i];
      }
      const std::size_t views =
          rng.uniform_int(config.views_min, config.views_max);
      const bool is_query = obj >= config.objects_per_category;
      const double clutter = is_query ? config.clutter_sigma : 0.0;

      if (!is_query) {
        ManifestObject entry;
        entry.id = category + numbered("_obj", obj, 4);
        entry.category = category;
        const std::uint64_t index = out.manifest.objects.size();
        for (std::size_t v = 0; v < views; ++v) {
          entry.views.push_back("synthetic/" + entry.id +
                                numbered("/view", v, 2) + ".png");
          const auto fv =
              noisy_view(center, config.view_noise_sigma, clutter, rng);
          out.features.records.push_back(
              {index, {fv.values().begin(), fv.values().end()}});
        }
        out.manifest.objects.push_back(std::move(entry));
      } else {
        Query q;
        q.id = category +
               numbered("_query", obj - config.objects_per_category, 3);
        q.category = category;
        for (std::size_t v = 0; v < views; ++v) {
          q.views.push_back(
              noisy_view(center, config.view_noise_sigma, clutter, rng));
        }
        out.queries.push_back(std::move(q));
      }
    }
  }
  return out;
}

void write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_manifest(data.manifest, dir / "manifest.json");
  save_features(data.features, dir / "features.mvf");
  save_query_set(data.queries, dir / "queries");
}

}  // namespace mvs
