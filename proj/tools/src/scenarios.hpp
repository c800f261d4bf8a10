#pragma once

#include "artifacts.hpp"
#include "run_config.hpp"

namespace cavkin::cli {

/// Runs `cfg.scenario`, writing CSVs and snapshots into `dir`. `threads` is
/// the resolved worker count for trajectory ensembles.
void run_scenario(const RunConfig& cfg, RunDirectory& dir, int threads);

}  // namespace cavkin::cli
