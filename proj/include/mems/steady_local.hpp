#pragma once

#include <functional>
#include <vector>

#include "mems/geometry.hpp"

namespace mems {

struct SteadyOptions {
  /// Converged when max |Delta w + lambda/(1-w)^2| <= residual_tol * max(1, lambda).
  double residual_tol = 1e-8;
  int max_iterations = 100000;
  /// NoSteadyState once an iterate reaches 1 - touchdown_margin.
  double touchdown_margin = 1e-6;
  /// Replace plain monotone steps by Newton steps whenever the linearization at
  /// the current iterate is positive definite. Newton from a subsolution with a
  /// positive linearization yields another subsolution above the current one
  /// and below the minimal solution, so the sequence keeps both properties.
  bool newton_acceleration = true;
};

struct SteadySolveStats {
  int monotone_steps = 0;
  int newton_steps = 0;
  double residual = 0.0;
};

/// max over unknown nodes of |Delta w + lambda / (1 - w)^2|.
double steady_residual(const Domain& d, double lambda, const DiscreteField& w);

/// Minimal solution of -Delta w = lambda/(1-w)^2, w = 0 on the boundary,
/// by monotone iteration from w = 0. Throws NoSteadyState beyond the fold.
DiscreteField minimal_solution(const Domain& d, double lambda, const SteadyOptions& opts = {});

/// Same, starting from a subsolution that lies below the minimal solution
/// (e.g. the minimal solution for a smaller lambda).
DiscreteField minimal_solution_from(const Domain& d, double lambda, const DiscreteField& subsolution,
                                    const SteadyOptions& opts = {}, SteadySolveStats* stats = nullptr);

struct MonotoneRun {
  DiscreteField w;
  int iterations = 0;
  bool converged = false;
};

/// Plain iteration -Delta w_{k+1} = lambda/(1-w_k)^2 from an arbitrary start.
/// From a subsolution the iterates increase; from a supersolution they
/// decrease. `observer` sees every iterate.
MonotoneRun monotone_iteration(const Domain& d, double lambda, const DiscreteField& start,
                               const SteadyOptions& opts = {},
                               const std::function<void(const DiscreteField&)>& observer = {});

struct BranchPoint {
  double lambda = 0.0;
  DiscreteField w;
  double sup_w = 0.0;
  double lin_eig = 0.0;
};

/// Lower branch of minimal solutions and the fold (pull-in voltage).
struct SteadyBranch {
  std::vector<BranchPoint> points;
  double lambda_star = 0.0;  // midpoint of the fold bracket
  double fold_lower = 0.0;   // last lambda with a solution (= points.back().lambda)
  double fold_upper = 0.0;   // first lambda without one
  DiscreteField w_star;      // profile at fold_lower
  double mu1 = 0.0;          // principal eigenvalue of the domain
};

struct BranchOptions {
  /// Initial continuation step; 0 selects 0.05 * mu1.
  double initial_step = 0.0;
  /// Fold bracket stops at (upper - lower) <= fold_rel_tol * upper.
  double fold_rel_tol = 1e-6;
  /// Halve the step once the linearized eigenvalue drops below this fraction of mu1.
  double slow_eig_fraction = 0.1;
  SteadyOptions solver;
};

SteadyBranch pull_in_voltage(const Domain& d, const BranchOptions& opts = {});

/// Profile at the highest resolved lambda.
const DiscreteField& w_star(const SteadyBranch& branch);

}  // namespace mems
