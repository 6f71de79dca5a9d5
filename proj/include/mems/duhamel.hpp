#pragma once

#include <optional>
#include <vector>

#include "mems/geometry.hpp"

namespace mems {

/// Action of the discrete Dirichlet heat semigroup at time t: Crank-Nicolson
/// sub-steps no longer than the grid spacing.
DiscreteField heat_propagate(const Domain& d, const DiscreteField& u0, double t);

/// Existence horizon (1 - a)^3 / (16 lambda) of the Picard construction.
double picard_existence_horizon(double a, double lambda);

/// u(x, t_m) on a uniform time grid t_m = m dt, m = 0..N.
struct SpaceTimeField {
  std::vector<double> times;
  std::vector<DiscreteField> slices;
};

struct PicardOptions {
  int time_steps = 200;
  double tol = 1e-8;
  bool stop_on_converge = true;
};

struct PicardRun {
  double horizon_T = 0.0;
  double a_bound = 0.0;  // (1 + a) / 2
  double dt = 0.0;
  double grid_spacing = 0.0;
  SpaceTimeField propagated_data;     // q = heat semigroup applied to u0
  std::vector<SpaceTimeField> iterates;  // u_1, u_2, ...
  std::optional<int> converged_at;       // k with ||u_k - u_{k-1}|| <= tol

  double discrete_tolerance() const { return 10.0 * (dt + grid_spacing * grid_spacing); }
};

/// Picard iterates of the Duhamel representation on [0, T], starting from the
/// time-independent iterate u_0(x, t) = u0(x). The time integral uses the
/// left-endpoint rule, so u_{k+1}(t_{m+1}) = P(dt) [u_{k+1}(t_m) + dt F(u_k(t_m))].
PicardRun picard_iterate(const Domain& d, double chi, double lambda, const DiscreteField& u0, int k_max,
                         const PicardOptions& opts = {});

/// Max-norm distance between two space-time fields on the same grid.
double max_difference(const SpaceTimeField& a, const SpaceTimeField& b);

}  // namespace mems
