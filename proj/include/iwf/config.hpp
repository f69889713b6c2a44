// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iwf/experiments.hpp"

namespace iwf {

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sectioned key/value text:
///
///   # comment
///   [section]
///   key = value
///
/// Sections and keys keep their file order. Duplicate keys are rejected.
class ConfigDocument {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  static ConfigDocument parse(std::string_view text);

  std::optional<std::string> get(std::string_view section, std::string_view key) const;
  void set(const std::string& section, const std::string& key, std::string value);
  void erase(std::string_view section, std::string_view key);

  /// Applies "section.key=value".
  void apply_override(std::string_view assignment);

  const std::vector<std::pair<std::string, Entries>>& sections() const { return sections_; }
  std::string to_string() const;

 private:
  std::vector<std::pair<std::string, Entries>> sections_;
};

/// Builds and validates a scenario. Unknown sections or keys, bad values and
/// failed scenario validation raise ConfigError naming the offending key.
Scenario scenario_from_config(const ConfigDocument& doc);

ConfigDocument config_from_scenario(const Scenario& scenario);

std::string serialize_scenario(const Scenario& scenario);
Scenario parse_scenario(std::string_view text);

/// Reads a file into a ConfigDocument; ConfigError when unreadable.
ConfigDocument load_config_file(const std::filesystem::path& path);

/// Shortest decimal that parses back to the same double; "inf" for +inf.
std::string format_double(double value);

}  // namespace iwf
