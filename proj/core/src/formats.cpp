#include "mvs/formats.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mvs/error.hpp"

namespace mvs {
namespace {

using json = nlohmann::json;

constexpr std::string_view kFeatureMagic = "MVF1";
constexpr std::string_view kIndexMagic = "MVI1";
constexpr std::size_t kFeatureHeaderSize = 4 + 4 + 4 + 8;

class ByteWriter {
 public:
  explicit ByteWriter(std::string& out) : out_(out) {}

  void raw(std::string_view bytes) { out_.append(bytes); }
  void u32(std::uint32_t v) { little_endian(v, 4); }
  void u64(std::uint64_t v) { little_endian(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

 private:
  void little_endian(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }

  std::string& out_;
};

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::uint64_t base_offset)
      : bytes_(bytes), base_(base_offset) {}

  std::uint64_t offset() const noexcept { return base_ + pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void expect_magic(std::string_view magic) {
    need(magic.size(), "magic");
    const auto got = bytes_.substr(pos_, magic.size());
    if (got != magic) {
      fail("bad magic: expected '" + std::string(magic) + "'");
    }
    pos_ += magic.size();
  }

  void expect_version(std::uint32_t expected) {
    const auto at = offset();
    const auto v = u32("version");
    if (v != expected) {
      throw Error(ErrorCode::kFormatError,
                  "unsupported version " + std::to_string(v) +
                      " (expected " + std::to_string(expected) + ")",
                  at);
    }
  }

  std::uint32_t u32(const char* what) {
    return static_cast<std::uint32_t>(little_endian(4, what));
  }
  std::uint64_t u64(const char* what) { return little_endian(8, what); }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::kFormatError, message, offset());
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      fail(std::string("truncated input while reading ") + what);
    }
  }

  std::uint64_t little_endian(int width, const char* what) {
    need(static_cast<std::size_t>(width), what);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string_view bytes_;
  std::uint64_t base_;
  std::size_t pos_ = 0;
};

float decode_f32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return std::bit_cast<float>(v);
}

}  // namespace

std::string encode_features(const FeatureFile& file) {
  std::string out;
  out.reserve(kFeatureHeaderSize +
              file.records.size() * (8 + 4 * static_cast<std::size_t>(file.dim)));
  ByteWriter w(out);
  w.raw(kFeatureMagic);
  w.u32(kFormatVersion);
  w.u32(file.dim);
  w.u64(file.records.size());
  for (const auto& rec : file.records) {
    if (rec.values.size() != file.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature record of length " +
                      std::to_string(rec.values.size()) +
                      " in a file of dim " + std::to_string(file.dim));
    }
    w.u64(rec.object_index);
    for (float x : rec.values) w.f32(x);
  }
  return out;
}

FeatureFile decode_features(std::string_view bytes, std::uint64_t base_offset) {
  ByteReader r(bytes, base_offset);
  r.expect_magic(kFeatureMagic);
  r.expect_version(kFormatVersion);

  FeatureFile file;
  const auto dim_at = r.offset();
  file.dim = r.u32("dim");
  if (file.dim == 0) {
    throw Error(ErrorCode::kFormatError, "dim must be positive", dim_at);
  }
  const auto count_at = r.offset();
  const auto count = r.u64("view_count");
  const std::uint64_t record_size = 8 + 4 * static_cast<std::uint64_t>(file.dim);
  if (count > r.remaining() / record_size) {
    throw Error(ErrorCode::kFormatError,
                "view_count " + std::to_string(count) +
                    " exceeds the records present in the payload",
                count_at);
  }
  if (count * record_size != r.remaining()) {
    throw Error(ErrorCode::kFormatError,
                "trailing bytes after " + std::to_string(count) + " records",
                base_offset + kFeatureHeaderSize + count * record_size);
  }

  file.records.resize(count);
  for (auto& rec : file.records) {
    rec.object_index = r.u64("object_index");
    const auto payload = r.take(4 * static_cast<std::size_t>(file.dim), "values");
    rec.values.resize(file.dim);
    for (std::size_t i = 0; i < file.dim; ++i) {
      rec.values[i] = decode_f32(payload.data() + 4 * i);
    }
  }
  return file;
}

std::string manifest_to_json(const Manifest& manifest) {
  json objects = json::array();
  for (const auto& o : manifest.objects) {
    objects.push_back(
        {{"id", o.id}, {"category", o.category}, {"views", o.views}});
  }
  json doc = {{"dim", manifest.dim}, {"objects", std::move(objects)}};
  return doc.dump();
}

Manifest manifest_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Manifest m;
    const auto dim = doc.at("dim").get<std::int64_t>();
    if (dim <= 0 || dim > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorCode::kFormatError,
                  "manifest dim out of range: " + std::to_string(dim));
    }
    m.dim = static_cast<std::uint32_t>(dim);
    for (const auto& o : doc.at("objects")) {
      m.objects.push_back({o.at("id").get<std::string>(),
                           o.at("category").get<std::string>(),
                           o.at("views").get<std::vector<std::string>>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                std::string("invalid manifest JSON: ") + e.what());
  }
}

std::string encode_index(const Database& db) {
  const std::string manifest = manifest_to_json(db.manifest());
  std::string out;
  ByteWriter w(out);
  w.raw(kIndexMagic);
  w.u32(kFormatVersion);
  w.u64(manifest.size());
  w.raw(manifest);
  out += encode_features(db.features());
  return out;
}

Database decode_index(std::string_view bytes) {
  ByteReader r(bytes, 0);
  r.expect_magic(kIndexMagic);
  r.expect_version(kFormatVersion);
  const auto length_at = r.offset();
  const auto length = r.u64("manifest_length");
  if (length > r.remaining()) {
    throw Error(ErrorCode::kFormatError,
                "manifest_length " + std::to_string(length) +
                    " exceeds file size",
                length_at);
  }
  const auto manifest_at = r.offset();
  Manifest manifest;
  try {
    manifest = manifest_from_json(r.take(length, "manifest"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what(), manifest_at);
  }
  const auto payload_at = r.offset();
  auto features = decode_features(r.take(r.remaining(), "features"), payload_at);
  return Database::build(manifest, features);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "cannot open '" + tmp.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorCode::kIoError, "short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot rename into '" + path.string() + "': " + ec.message());
  }
}

FeatureFile load_features(const std::filesystem::path& path) {
  return decode_features(read_file(path));
}

void save_features(const FeatureFile& file, const std::filesystem::path& path) {
  write_file(path, encode_features(file));
}

Manifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_file(path));
}

void save_manifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  write_file(path, manifest_to_json(manifest));
}

Database load_index(const std::filesystem::path& path) {
  return decode_index(read_file(path));
}

void save_index(const Database& db, const std::filesystem::path& path) {
  write_file(path, encode_index(db));
}

Query load_query(const std::filesystem::path& path, std::string id) {
  const auto file = load_features(path);
  if (file.records.empty()) {
    throw Error(ErrorCode::kEmptyViewSet,
                "query file '" + path.string() + "' has no views");
  }
  Query q;
  q.id = id.empty() ? path.stem().string() : std::move(id);
  for (const auto& rec : file.records) {
    validate_features(rec.values);
    q.views.push_back(ensure_unit_norm(FeatureVector(rec.values)));
  }
  return q;
}

FeatureFile query_to_features(const Query& query) {
  FeatureFile f;
  f.dim = query.views.empty()
              ? 0
              : static_cast<std::uint32_t>(query.views.front().dim());
  for (const auto& v : query.views) {
    f.records.push_back({0, {v.values().begin(), v.values().end()}});
  }
  return f;
}

std::vector<Query> load_query_set(const std::filesystem::path& dir) {
  const auto listing = dir / "queries.json";
  std::vector<Query> out;
  json doc;
  try {
    doc = json::parse(read_file(listing));
    for (const auto& entry : doc.at("queries")) {
      const auto file = entry.at("file").get<std::string>();
      Query q = load_query(dir / file, entry.at("id").get<std::string>());
      if (entry.contains("category") && !entry.at("category").is_null()) {
        q.category = entry.at("category").get<std::string>();
      }
      out.push_back(std::move(q));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, "invalid '" + listing.string() +
                                             "': " + e.what());
  }
  return out;
}

void save_query_set(std::span<const Query> queries,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json entries = json::array();
  std::uint32_t dim = 0;
  for (const auto& q : queries) {
    const std::string file = q.id + ".mvf";
    const auto features = query_to_features(q);
    dim = features.dim;
    save_features(features, dir / file);
    json entry = {{"id", q.id}, {"file", file}};
    entry["category"] = q.category ? json(*q.category) : json(nullptr);
    entries.push_back(std::move(entry));
  }
  json doc = {{"dim", dim}, {"queries", std::move(entries)}};
  write_file(dir / "queries.json", doc.dump(2) + "\n");
}

}  // namespace mvs
