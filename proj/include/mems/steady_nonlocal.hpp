#pragma once

#include <optional>

#include "mems/steady_local.hpp"

namespace mems {

/// Solution v = w_{mu_root} of the nonlocal steady problem, where mu_root is
/// the root of mu (1 + chi int 1/(1 - w_mu))^2 = lambda.
struct NonlocalSolution {
  double lambda = 0.0;
  double chi = 0.0;
  double mu_root = 0.0;
  DiscreteField v;
  double capacitance_integral = 0.0;  // int dx / (1 - v)
};

struct ThresholdReport {
  double lambda_star_local = 0.0;
  /// lambda* (1 + chi int 1/(1 - w*))^2, evaluated at the resolved fold point.
  double lambda_star_N = 0.0;
  /// Convex-domain nonexistence bound; balls with n >= 2 only.
  std::optional<double> lambda_N_upper;
  /// Global-existence threshold chi (1 + chi |Omega|) / (2 |Omega|); interval only.
  std::optional<double> threshold_1d;
  double capacitance_w_star = 0.0;
};

double capacitance_integral(const Domain& d, const DiscreteField& w);

/// Nonlocal bracket factor (1 + chi int 1/(1 - u))^2.
double nonlocal_factor(const Domain& d, double chi, const DiscreteField& u);

/// Root finder for the scalar reduction, holding the local branch of one domain.
class NonlocalSolver {
 public:
  NonlocalSolver(const Domain& d, SteadyBranch branch, SteadyOptions opts = {});

  const Domain& domain() const { return d_; }
  const SteadyBranch& branch() const { return branch_; }

  /// h(mu) = mu (1 + chi int 1/(1 - w_mu))^2 for 0 <= mu <= fold_lower.
  double h(double chi, double mu) const;

  /// Largest resolvable value h(fold_lower).
  double h_max(double chi) const;

  /// Bisection on the monotone map h; RootOutOfRange above h_max.
  NonlocalSolution solve(double chi, double lambda) const;

  ThresholdReport thresholds(double chi) const;

  /// Smallest lambda on the geometric grid start * ratio^k at which solve()
  /// reports RootOutOfRange.
  double observed_nonexistence_onset(double chi, double ratio = 1.005) const;

 private:
  DiscreteField minimal(double mu, const DiscreteField* below) const;

  const Domain& d_;
  SteadyBranch branch_;
  SteadyOptions opts_;
};

double h_map(const Domain& d, double chi, double mu, const SteadyOptions& opts = {});

NonlocalSolution solve_nonlocal_steady(const Domain& d, double chi, double lambda);

ThresholdReport thresholds(const Domain& d, double chi);

/// Upper bound (n+2)^2 |dOmega| / (8 a n) (chi (2 + chi |Omega|) + 1/|Omega|)
/// on the nonexistence threshold. UnsupportedDomain unless d is a ball, n >= 2.
double nonexistence_upper_bound(const Domain& d, double chi);

/// chi (1 + chi |Omega|) / (2 |Omega|); UnsupportedDomain unless d is an interval.
double global_existence_threshold_1d(const Domain& d, double chi);

/// max |Delta v + lambda / ((1 - v)^2 (1 + chi int 1/(1 - v))^2)| on unknowns.
double nonlocal_residual(const Domain& d, double chi, double lambda, const DiscreteField& v);

/// Max-norm difference between v on `coarse` and the solution on the grid with
/// twice the cells, compared at the shared nodes. Halving h should reduce it
/// by about 4.
double refinement_defect(const DomainSpec& coarse, double chi, double lambda);
/// Same, reusing solvers whose grids are M and 2M + 1.
double refinement_defect(const NonlocalSolver& coarse, const NonlocalSolver& fine, double chi, double lambda);

}  // namespace mems
