#pragma once

#include "config.hpp"

namespace curveflow::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitMetric = 4;

int cmd_evolve(const RunConfig& config);
int cmd_converge(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

/// Re-renders frames and the overlay from an existing snapshots.jsonl in the
/// configured output directory.
int cmd_render(const RunConfig& config);

}  // namespace curveflow::cli
