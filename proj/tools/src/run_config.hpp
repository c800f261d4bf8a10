#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavkin/model.hpp"

namespace cavkin::cli {

/// Schema or parse failure; what() is "<file>:<line>: <message>". Exit code 2.
class ConfigFileError : public std::runtime_error {
 public:
  ConfigFileError(std::string key, int line, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

const std::vector<std::string>& scenario_names();

/// Resolved run configuration: the model block plus the scenario block with
/// every default filled in.
struct RunConfig {
  std::string scenario;
  ModelParams model;
  nlohmann::json block;  ///< scenario parameters, defaults applied
  std::string output_dir;

  /// Full resolved config as written to config.json (output_dir left out so
  /// manifests do not depend on where the run was written).
  nlohmann::json to_json() const;
};

/// Parse and validate `text` (the contents of `source`) for `scenario`.
RunConfig parse_run_config(const std::string& text, const std::string& scenario,
                           const std::string& source = "config");

RunConfig load_run_config(const std::filesystem::path& path, const std::string& scenario);

/// Defaults of a scenario block.
nlohmann::json default_block(const std::string& scenario);

}  // namespace cavkin::cli
