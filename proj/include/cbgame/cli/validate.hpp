#pragma once

#include <string>
#include <vector>

#include "cbgame/cli/config.hpp"

namespace cbgame::cli {

struct InvariantResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string relation;  // how measured compares to limit when passing, e.g. "<="
};

/// Solves the configured contract and checks the invariants that apply to its regime:
/// boundary data, value and gradient estimates, closed-form agreement (Dirichlet), free-boundary
/// position and shape, lattice cross-check, lattice action labels and the saddle-point inequalities.
std::vector<InvariantResult> run_invariants(const RunConfig& config);

/// Fixed-width pass/fail table; contains no timings, so identical configs give identical text.
std::string format_table(const std::vector<InvariantResult>& results);

}  // namespace cbgame::cli
