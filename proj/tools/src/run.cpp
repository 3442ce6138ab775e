#include "anpid_cli/run.hpp"

namespace anpid::cli {

SweepResult run_experiment(const RunConfig& config) {
  switch (config.experiment) {
    case Experiment::ser_vs_iteration: return ser_vs_iteration(config.sweep);
    case Experiment::ser_vs_load: return ser_vs_load(config.sweep);
    case Experiment::ser_vs_esno:
    case Experiment::bounds_only: return ser_vs_esno(config.sweep);
  }
  return {};
}

}  // namespace anpid::cli
