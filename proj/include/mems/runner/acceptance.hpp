#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace mems::runner {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic: measured values and thresholds only
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Scratch space for the determinism check.
  std::filesystem::path work_dir = "acceptance_work";
  /// When set, determinism is checked by running `<cli> verify-all` twice;
  /// otherwise by running the evolve pipeline twice in process.
  std::string cli_path;
  /// Criterion ids to run; empty means all.
  std::vector<int> only;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(const AcceptanceOptions&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs the selected criteria in order. A criterion that throws is reported
/// as failed with the error message.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace mems::runner
