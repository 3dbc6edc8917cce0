#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmg/app/config.hpp"

namespace qmg::app {

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunOutcome {
  std::vector<Check> checks;
  nlohmann::json results;
  std::vector<Artifact> artifacts;  // the verdict JSON comes last
  std::string summary;              // human-readable, for stdout

  bool pass() const;
};

/// Validates `config` (throwing ConfigError) and runs its subcommand.
/// Integrity failures inside a run propagate as exceptions.
RunOutcome run(const RunConfig& config);

/// Verdict written when a run aborts on an integrity failure.
Artifact failure_verdict(const RunConfig& config, const std::string& message);

/// `env` if set and nonempty, else `configured`.
std::filesystem::path output_directory(const std::string& configured, const char* env);

void write_artifacts(const std::vector<Artifact>& artifacts, const std::filesystem::path& dir);

}  // namespace qmg::app
