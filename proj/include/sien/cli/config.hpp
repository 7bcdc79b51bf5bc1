// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sien/congruity/dataset.hpp"
#include "sien/congruity/objective.hpp"
#include "sien/evaluation/scenario.hpp"
#include "sien/topology/generate.hpp"

namespace sien::cli {

struct KeyInfo {
  std::string_view name;
  std::string_view default_value;  // empty = unset
  std::string_view help;
};

// Every accepted configuration key with its default.
std::span<const KeyInfo> known_keys();

// Flat `key = value` document; `#` starts a comment. Unknown and repeated
// keys are rejected.
class Config {
 public:
  // Throws ConfigError (with line numbers).
  static Config parse(std::istream& in);
  static Config parse(std::string_view text);
  // Throws IoError, ConfigError.
  static Config load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  // Explicit value or the documented default.
  std::optional<std::string> raw(std::string_view key) const;
  // Throws ConfigError when the key is missing or malformed.
  std::string require(std::string_view key) const;
  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;
  std::vector<std::uint64_t> get_u64s(std::string_view key) const;

  void set(std::string_view key, std::string value);

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

topology::Scenario scenario_of(const Config& c);  // requires `scenario`
topology::TopologyParams topology_params(const Config& c);
congruity::Hyperparams hyperparams(const Config& c);
congruity::DatasetSpec dataset_spec(const Config& c);
std::vector<std::size_t> network_widths(const Config& c);
evaluation::ScenarioParams scenario_params(const Config& c);

// Defaults table for --help.
std::string describe_keys();

}  // namespace sien::cli
