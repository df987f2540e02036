#pragma once

// Deterministic serialization: shortest-round-trip float formatting, a small
// CSV writer, atomic file emission, and the run manifest. Identical inputs
// must produce byte-identical files, so nothing here consults the clock,
// locale, or filesystem state.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hololab/common.hpp"

namespace hololab::report {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

using CsvValue = std::variant<std::int64_t, std::uint64_t, double, bool,
                              std::string>;

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      body_ += (i ? "," : "") + csv_escape(columns_[i]);
    body_ += '\n';
  }

  void add_row(const std::vector<CsvValue>& row) {
    if (row.size() != columns_.size())
      throw std::invalid_argument("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) body_ += ',';
      body_ += std::visit(
          [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              return format_double(v);
            else if constexpr (std::is_same_v<T, bool>)
              return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>)
              return csv_escape(v);
            else
              return std::to_string(v);
          },
          row[i]);
    }
    body_ += '\n';
  }

  // an optional leading comment line, e.g. covariance layout
  void set_preamble(const std::string& line) { preamble_ = line + "\n"; }

  std::string str() const { return preamble_ + body_; }

 private:
  std::vector<std::string> columns_;
  std::string preamble_;
  std::string body_;
};

// write-to-temp-then-rename so partially written files never surface
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// FNV over the canonical dump; output_dir is excluded so the hash names the
// numeric content of a run, not where it landed
inline std::uint64_t config_hash(nlohmann::json config) {
  config.erase("output_dir");
  return fnv1a64(config.dump());
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

struct Manifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::uint64_t cfg_hash = 0;
  std::vector<std::string> files;  // sorted relative names

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["artifact_version"] = std::string(kArtifactVersion);
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    j["config_hash"] = hex64(cfg_hash);
    j["files"] = files;
    return j;
  }
};

}  // namespace hololab::report
