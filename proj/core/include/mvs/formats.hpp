#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvs/database.hpp"

namespace mvs {

// MVF1 feature file, little-endian:
//   "MVF1" | u32 version=1 | u32 dim | u64 view_count
//   view_count x { u64 object_index | dim x f32 }
//
// MVI1 index file:
//   "MVI1" | u32 version=1 | u64 manifest_length | manifest JSON | MVF1 payload
//
// Decoders throw Error(kFormatError) carrying the byte offset of the first
// bad field, measured from the start of the outermost file.

inline constexpr std::uint32_t kFormatVersion = 1;

std::string encode_features(const FeatureFile& file);
FeatureFile decode_features(std::string_view bytes,
                            std::uint64_t base_offset = 0);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view json);

std::string encode_index(const Database& db);
Database decode_index(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view bytes);

FeatureFile load_features(const std::filesystem::path& path);
void save_features(const FeatureFile& file, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Database load_index(const std::filesystem::path& path);
void save_index(const Database& db, const std::filesystem::path& path);

/// A query file is an MVF1 whose records are all views of one query object.
/// Views are normalized on load.
Query load_query(const std::filesystem::path& path, std::string id = {});
FeatureFile query_to_features(const Query& query);

// Query set directory layout:
//   <dir>/queries.json  {"dim": d, "queries": [{"id", "category", "file"}]}
//   <dir>/<file>        one MVF1 per query
std::vector<Query> load_query_set(const std::filesystem::path& dir);
void save_query_set(std::span<const Query> queries,
                    const std::filesystem::path& dir);

}  // namespace mvs
