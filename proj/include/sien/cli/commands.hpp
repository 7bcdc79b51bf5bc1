// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sien/cli/config.hpp"

namespace sien::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 1, kRuntime = 2 };

// Files staged in memory and moved into place together, so a failed
// command leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void add(const std::filesystem::path& relative, std::string content);
  // Throws IoError; already-renamed files are removed again on failure.
  void commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

struct GlobalOptions {
  Config config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::uint64_t first_seed() const;
};

// Each command returns the files it produced, relative to the output dir.
std::vector<std::string> cmd_gen_topo(const GlobalOptions& g);
std::vector<std::string> cmd_containerize(const GlobalOptions& g, const std::optional<std::filesystem::path>& topo);
std::vector<std::string> cmd_train(const GlobalOptions& g, const std::vector<std::filesystem::path>& datasets);
std::vector<std::string> cmd_run(const GlobalOptions& g);
std::vector<std::string> cmd_report(const GlobalOptions& g, const std::vector<std::filesystem::path>& reports);

// Entry point of the `sien` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sien::cli
