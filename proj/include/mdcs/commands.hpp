#pragma once

#include <string>
#include <vector>

#include "mdcs/config.hpp"

namespace mdcs {

struct CommandResult {
  int exit_code = 0;              // 0 ok, 1 assertion/verdict failure
  std::vector<std::string> files; // everything written, in order
};

CommandResult cmd_converge(const RunConfig& cfg);
CommandResult cmd_stability(const RunConfig& cfg);
CommandResult cmd_stepdyn(const RunConfig& cfg);
CommandResult cmd_ablate(const RunConfig& cfg);
CommandResult cmd_counterexample(const RunConfig& cfg);
CommandResult cmd_bench(const RunConfig& cfg);

/// Dispatch on cfg.experiment.
CommandResult run_command(const RunConfig& cfg);

}  // namespace mdcs
