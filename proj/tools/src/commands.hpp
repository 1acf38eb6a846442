#pragma once

#include "config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace chainglue::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,   // parse, schema, invalid n, site cap
  kExitFailure = 3,  // gap collapse, stage failure, degenerate fit
};

struct RunOptions {
  std::filesystem::path out_dir;
  int jobs = 1;
  int max_sites = kDefaultMaxSites;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> failures;  // one line per failed cell
};

/// Each command writes <name>.csv (config_hash in the first column) and
/// <name>_metadata.json (timings, jobs, cap). Config-level problems throw
/// ConfigError or ResourceLimitError before any file is written.
CommandResult cmd_glue(const ExperimentConfig& config, const RunOptions& options);
CommandResult cmd_certify(const ExperimentConfig& config, const RunOptions& options);
CommandResult cmd_truncation(const ExperimentConfig& config, const RunOptions& options);
CommandResult cmd_lr(const ExperimentConfig& config, const RunOptions& options);

}  // namespace chainglue::cli
