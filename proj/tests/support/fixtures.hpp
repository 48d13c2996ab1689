#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mvs/database.hpp"
#include "mvs/error.hpp"
#include <optional>

namespace fixtures {

/// The code of the mvs::Error thrown by fn, or nullopt if it returns.
template <typename Fn>
std::optional<mvs::ErrorCode> error_code(Fn&& fn) {
  try {
    fn();
  } catch (const mvs::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline mvs::FeatureVector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(normal(rng));
  return mvs::l2_normalize(mvs::FeatureVector(std::move(v)));
}

inline mvs::ViewSet random_views(std::mt19937_64& rng, std::size_t count,
                                 std::size_t dim) {
  mvs::ViewSet out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_unit(rng, dim));
  return out;
}

struct Object {
  std::string id;
  std::string category;
  mvs::ViewSet views;
};

inline mvs::Database make_database(const std::vector<Object>& objects) {
  mvs::Manifest manifest;
  mvs::FeatureFile features;
  manifest.dim = static_cast<std::uint32_t>(objects.at(0).views.at(0).dim());
  features.dim = manifest.dim;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    mvs::ManifestObject entry{objects[i].id, objects[i].category, {}};
    for (std::size_t v = 0; v < objects[i].views.size(); ++v) {
      entry.views.push_back(objects[i].id + "/" + std::to_string(v) + ".jpg");
      const auto values = objects[i].views[v].values();
      features.records.push_back({i, {values.begin(), values.end()}});
    }
    manifest.objects.push_back(std::move(entry));
  }
  return mvs::Database::build(manifest, features);
}

/// Random database with object ids "o000".. and categories "c0".."c{cats-1}".
inline std::vector<Object> random_objects(std::mt19937_64& rng,
                                          std::size_t count, std::size_t dim,
                                          std::size_t max_views,
                                          std::size_t categories = 3) {
  std::uniform_int_distribution<std::size_t> views(1, max_views);
  std::vector<Object> out;
  for (std::size_t i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "o%03zu", i);
    out.push_back({id, "c" + std::to_string(i % categories),
                   random_views(rng, views(rng), dim)});
  }
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mvs_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
