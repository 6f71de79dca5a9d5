#pragma once

#include <filesystem>

#include "mems/diagnostics.hpp"
#include "mems/runner/config.hpp"
#include "mems/runner/record.hpp"

namespace mems::runner {

/// Runs one experiment. Solver errors become failed verdicts. `out_dir` is
/// only used as scratch space by verify-all.
ResultRecord run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Runs the experiment and writes record.json, series.csv (when the run has a
/// time series) and the SVG plots into `out_dir`. Returns the exit status:
/// 0 when no verdict failed, 1 otherwise.
int run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Time series with the series.csv columns for one run.
Series time_series(const Domain& d, const EvolutionResult& res, const EigenPair& eig);

}  // namespace mems::runner
