#pragma once

#include <ostream>

#include "cbgame/cli/config.hpp"

namespace cbgame::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kSolverError = 3, kIoError = 4 };

// Each command writes its report to `out` (or to config.out when set) and returns an exit code.
// Library exceptions propagate; run_command() maps them to exit codes.
int cmd_classify(const RunConfig& config, std::ostream& out);
int cmd_price(const RunConfig& config, std::ostream& out);
int cmd_surface(const RunConfig& config, std::ostream& out);
int cmd_boundary(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_validate(const RunConfig& config, std::ostream& out);

/// Dispatches by name after checking the config; catches everything and prints one error line
/// to `err`.
int run_command(const std::string& name, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Worker count for sweeps: CBGAME_THREADS if set to a positive integer, else the hardware count.
unsigned sweep_threads();

}  // namespace cbgame::cli
