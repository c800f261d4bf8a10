#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavkin/time_series.hpp"

namespace cavkin::cli {

std::string sha256_hex(const std::filesystem::path& file);

// One output directory per run: config.json, manifest.json, *.csv, snapshots/.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path snapshots() const { return root_ / "snapshots"; }

  void write_csv(const std::string& name, const TimeSeries& series);
  void write_json(const std::string& name, const nlohmann::json& j);
  /// Register a file written elsewhere under root (path relative to root).
  void add(const std::string& relative);

  /// Writes config.json and manifest.json (sha256 of every registered file).
  void finalize(const nlohmann::json& config, const std::string& scenario);

 private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

}  // namespace cavkin::cli
