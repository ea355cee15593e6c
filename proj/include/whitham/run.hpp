#pragma once

// Command dispatch: runs one resolved config and writes its artifacts.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "whitham/config.hpp"
#include "whitham/error.hpp"

namespace whitham {

/// 0 success, 2 validation, 3 numerical failure, 4 I/O.
int exit_code(ErrorKind kind);

struct RunResult {
  int exit_code = 0;
  std::filesystem::path dir;
  /// Machine-readable error object (empty on success).
  std::string error_json;
};

/// Runs the command into config.output_dir (or a fresh timestamped directory
/// under the default root). Progress and the summary go to `out`. Module
/// errors are caught, written to error.json when the directory exists, and
/// reported through the result.
RunResult run(const RunConfig& config, std::ostream& out);

/// Error object for failures before a run directory exists.
std::string error_json(const std::exception& e);

}  // namespace whitham
