#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Field accessors. All throw ValidationError naming the field.

namespace js {

inline const Json& at(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

inline bool has(const Json& j, const char* key) {
  auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

inline std::string str(const Json& j, const char* key) {
  const auto& v = at(j, key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::optional<std::string> opt_str(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return str(j, key);
}

inline std::uint64_t u64(const Json& j, const char* key) {
  const auto& v = at(j, key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_string()) {
    auto n = parse_u256(v.get<std::string>());
    if (n > std::numeric_limits<std::uint64_t>::max())
      throw ValidationError(std::string("field '") + key + "' out of range");
    return static_cast<std::uint64_t>(n);
  }
  throw ValidationError(std::string("field '") + key + "' must be a non-negative integer");
}

inline std::optional<std::uint64_t> opt_u64(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return u64(j, key);
}

inline std::int64_t i64(const Json& j, const char* key) {
  const auto& v = at(j, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline U256 u256(const Json& j, const char* key) {
  const auto& v = at(j, key);
  try {
    if (v.is_string()) return parse_u256(v.get<std::string>());
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))
      return U256(v.get<std::uint64_t>());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
  throw ValidationError(std::string("field '") + key + "' must be a decimal string");
}

inline Address address(const Json& j, const char* key) {
  try {
    return Address::parse(str(j, key));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::optional<Address> opt_address(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return address(j, key);
}

inline Hash32 hash32(const Json& j, const char* key) {
  try {
    return Hash32::parse(str(j, key));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

inline bool boolean(const Json& j, const char* key, bool fallback) {
  if (!has(j, key)) return fallback;
  const auto& v = at(j, key);
  if (!v.is_boolean()) throw ValidationError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json opt(const std::optional<Address>& v) { return v ? Json(v->hex()) : Json(nullptr); }

}  // namespace js

// ---------------------------------------------------------------------------
// Line readers and writers

/// Reads text lines from a plain or gzip-compressed file.
class LineReader {
public:
  explicit LineReader(const std::filesystem::path& path) : path_(path) {
    file_ = gzopen(path.string().c_str(), "rb");
    if (file_ == nullptr) throw ValidationError("cannot open " + path.string());
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;
  ~LineReader() {
    if (file_ != nullptr) gzclose(file_);
  }

  /// False at end of file. Strips the trailing newline and CR.
  bool next(std::string& line) {
    line.clear();
    char buf[8192];
    bool any = false;
    while (gzgets(file_, buf, sizeof buf) != nullptr) {
      any = true;
      line += buf;
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) {
      int err = 0;
      const char* msg = gzerror(file_, &err);
      if (err != Z_OK && err != Z_STREAM_END)
        throw ValidationError("read error in " + path_.string() + ": " + msg);
      return false;
    }
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    ++line_no_;
    return true;
  }

  std::size_t line_no() const noexcept { return line_no_; }
  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  gzFile file_ = nullptr;
  std::size_t line_no_ = 0;
};

/// Calls fn(json, line_no) for every non-blank line. Parse errors and
/// ValidationErrors thrown by fn are re-thrown with "path:line: " prepended.
inline void for_each_jsonl(const std::filesystem::path& path,
                           const std::function<void(const Json&, std::size_t)>& fn) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(reader.line_no()) + ": ";
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError(where + "malformed JSON: " + e.what());
    }
    try {
      fn(j, reader.line_no());
    } catch (const DataIntegrityError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    } catch (const Json::exception& e) {
      throw ValidationError(where + e.what());
    }
  }
}

template <class T, class Parse>
std::vector<T> read_jsonl(const std::filesystem::path& path, Parse&& parse) {
  std::vector<T> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(parse(j)); });
  return out;
}

/// Non-empty, non-comment lines of a plain list file (addresses, words).
inline std::vector<std::string> read_list_file(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<std::string> out;
  std::string line;
  while (reader.next(line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

class JsonlWriter {
public:
  explicit JsonlWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("cannot write " + path.string());
  }

  void write(const Json& j) { out_ << j.dump() << '\n'; }

  void close() {
    out_.close();
    if (!out_) throw ValidationError("write failed for " + path_.string());
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

template <class Range, class ToJson>
void write_jsonl(const std::filesystem::path& path, const Range& items, ToJson&& to_json) {
  JsonlWriter w(path);
  for (const auto& item : items) w.write(to_json(item));
  w.close();
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("write failed for " + path.string());
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
}

}  // namespace nftsquat
