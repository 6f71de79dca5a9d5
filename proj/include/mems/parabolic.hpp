#pragma once

#include <string>
#include <vector>

#include "mems/steady_nonlocal.hpp"

namespace mems {

struct EvolveOptions {
  /// Initial and largest time step.
  double dt_init = 1e-3;
  double t_max = 1.0;
  /// Quench declared once sup u >= 1 - quench_tol.
  double quench_tol = 1e-3;
  /// Steady once max |u_t| <= steady_tol on `steady_window` consecutive samples.
  double steady_tol = 1e-8;
  int steady_window = 10;
  int sample_stride = 1;
  /// Keep integrating to t_max after steadiness has been detected.
  bool stop_on_steady = true;
  /// One implicit diffusion step of size h^2 before evolving (for rough data).
  bool smooth_initial_data = false;
};

enum class EvolutionStatus { ConvergedToSteady, Quenched, HorizonReached };

std::string_view to_string(EvolutionStatus s) noexcept;

struct Snapshot {
  double t = 0.0;
  DiscreteField u;
};

struct EvolutionParams {
  double lambda = 0.0;
  double chi = 0.0;
  std::uint64_t domain_id = 0;
  std::string u0;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<double> sup_u;
  std::vector<Snapshot> snapshots;  // one per entry of `times`
  EvolutionStatus status = EvolutionStatus::HorizonReached;
  double t_conv = 0.0;          // first time steadiness was detected
  double quench_lower = 0.0;    // last time with sup u < 1 - quench_tol
  double quench_upper = 0.0;    // first time with sup u >= 1 - quench_tol
  double quench_estimate = 0.0; // power-law extrapolation of 1 - sup u -> 0
  EvolutionParams params;
  double dt_max = 0.0;
  double grid_spacing = 0.0;
  long steps = 0;

  /// 10 (dt + h^2), the discrete tolerance used by the comparison checks.
  double discrete_tolerance() const { return 10.0 * (dt_max + grid_spacing * grid_spacing); }
};

/// First-order IMEX: backward Euler for diffusion, explicit nonlocal reaction.
EvolutionResult evolve(const Domain& d, double chi, double lambda, const DiscreteField& u0,
                       const EvolveOptions& opts = {}, std::string u0_descriptor = "field");

/// lambda / ((1 - u)^2 (1 + chi int 1/(1 - u))^2) at every node.
std::vector<double> nonlocal_forcing(const Domain& d, double chi, double lambda, const DiscreteField& u);

struct ComparisonReport {
  bool ordered = true;
  double max_violation = 0.0;  // max of (lo - hi)_+ over shared samples
  double tolerance = 0.0;
  std::size_t samples_compared = 0;
};

/// Checks lo <= hi + 10 (dt + h^2) nodewise at the shared sample times.
ComparisonReport assert_comparison(const EvolutionResult& lo, const EvolutionResult& hi);

/// || u(t_end) - target.v ||_inf for a run that reached a steady state.
double steady_limit_check(const EvolutionResult& res, const NonlocalSolution& target);

/// Fits 1 - sup u ~ A (T - t)^beta to the last samples before quenching.
double extrapolate_quench_time(std::span<const double> t, std::span<const double> sup_u);

}  // namespace mems
