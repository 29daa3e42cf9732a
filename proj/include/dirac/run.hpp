#pragma once

// Experiment orchestration behind the command-line tool.

#include "dirac/config.hpp"
#include "dirac/error.hpp"

#include <ostream>

namespace dirac {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitNoConvergence = 3,
  kExitAccuracy = 4,
};

int exit_code_for(ErrorKind kind);

/// Validates, runs the configured command, writes report files, a manifest
/// and run.log into config.output_dir, and prints a summary table to `out`.
/// Errors are caught, logged and mapped to an exit code.
int run(const RunConfig& config, std::ostream& out);

}  // namespace dirac
