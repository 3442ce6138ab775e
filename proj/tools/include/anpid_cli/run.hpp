#pragma once

#include "anpid/sim.hpp"
#include "anpid_cli/config.hpp"

namespace anpid::cli {

/// Runs the experiment selected by `config` and returns its records.
SweepResult run_experiment(const RunConfig& config);

}  // namespace anpid::cli
