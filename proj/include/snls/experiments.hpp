#pragma once

#include <string>

#include "snls/config.hpp"
#include "snls/ensemble.hpp"

namespace snls {

// Exit statuses of a preset run.
inline constexpr int kRunPassed = 0;  // every invariant check passed
inline constexpr int kRunFailed = 1;  // at least one invariant check failed
inline constexpr int kRunAborted = 2; // runtime abort (message carries the path seed)
inline constexpr int kRunHalted = 3;  // clean interrupt at run.halt_checkpoint

struct ExperimentResult {
    int exit_code = kRunPassed;
    std::string summary; // the summary.txt contents
};

// Builds the ensemble description the configured study runs on.
EnsembleSpec ensemble_spec_of(const ExperimentConfig& config);

// Runs the configured preset. Writes resolved.config, summary.txt, and the
// preset's CSV reports into config.output_dir (plus state/ with per-path
// files when the run halts at run.halt_checkpoint). A non-empty resume_dir
// continues a halted ensemble run from its serialized path states; outputs
// of the completed run are byte-identical to an uninterrupted one.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& resume_dir = "");

} // namespace snls
