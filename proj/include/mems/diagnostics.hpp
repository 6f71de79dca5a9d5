#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mems/parabolic.hpp"
#include "mems/spectral.hpp"

namespace mems {

struct EnergySample {
  double t = 0.0;
  double dissipation_cum = 0.0;  // int_{t0}^t int u_t^2
  double dirichlet = 0.0;        // 1/2 int |grad u|^2
  double nonlocal_pot = 0.0;     // lambda / (chi (1 + chi int 1/(1 - u)))
  double lyapunov = 0.0;         // sum of the three
};

/// Terms of the energy identity along a run. The Lyapunov sum is conserved
/// exactly by the continuous flow; the capped form of the identity is
/// dissipation + dirichlet(t) <= dirichlet(t0) + lambda / (chi (1 + chi |Omega|)).
struct EnergyLedger {
  double t0 = 0.0;
  double lambda = 0.0;
  double chi = 0.0;
  std::vector<EnergySample> samples;

  /// max_t |L(t) - L(t0)| / |L(t0)| (absolute when L(t0) = 0).
  double max_relative_drift() const;
  /// Right-hand side of the capped inequality.
  double cap(double volume) const;
  /// max_t (dissipation + dirichlet(t)) - cap.
  double max_cap_excess(double volume) const;
};

/// Requires at least three samples at or after t0 and chi > 0. u_t comes from
/// centred differences of the stored snapshots, the dissipation from the
/// trapezoid rule in time.
EnergyLedger energy_ledger(const Domain& d, const EvolutionResult& res, double t0);

/// The ledger terms from snapshot `first` on, without the sampling checks.
/// The potential is reported as 0 when chi = 0.
std::vector<EnergySample> energy_terms(const Domain& d, const EvolutionResult& res, std::size_t first = 0);

struct GlobalBoundsReport {
  double gradient_bound = 0.0;       // 2 lambda / (chi (1 + chi |Omega|))
  double sup_bound = 0.0;            // sqrt(2 lambda |Omega| / (chi (1 + chi |Omega|)))
  double steady_envelope = 0.0;      // 2 sqrt(b lambda / (chi (1 + chi |Omega|)))
  double max_gradient_sq = 0.0;      // max_t int u_x^2
  double max_sup = 0.0;              // max_t sup u
  double final_sup = 0.0;
  double tolerance = 0.0;
  bool gradient_ok = false;
  bool sup_ok = false;
  bool envelope_ok = false;
  bool all_ok() const { return gradient_ok && sup_ok && envelope_ok; }
};

/// One-dimensional global-existence bounds for a run from u0 = 0 with
/// lambda below chi (1 + chi |Omega|) / (2 |Omega|).
GlobalBoundsReport global_bounds_check(const Domain& d, const EvolutionResult& res, double chi, double lambda,
                                double tolerance = 1e-3);

struct MomentSample {
  double t = 0.0;
  double E = 0.0;              // int u phi1
  double dE_dt_numeric = 0.0;  // centred difference of E
  double rhs_exact = 0.0;      // -mu1 E + lambda int phi1/(1-u)^2 / (1 + chi int 1/(1-u))^2
};

struct MomentTrace {
  std::vector<MomentSample> samples;
  double tolerance_scale = 0.0;  // C (dt + h^2) with C = 10
  /// max over interior samples of (|dE/dt - rhs| / (1 + |rhs|)).
  double max_identity_defect() const;
  /// max over interior samples of (rhs - dE/dt) / (1 + |rhs|), the one-sided
  /// violation of dE/dt >= rhs.
  double max_inequality_violation() const;
  bool identity_holds() const { return max_identity_defect() <= tolerance_scale; }
  bool inequality_holds() const { return max_inequality_violation() <= tolerance_scale; }
  /// min over interior samples of dE/dt.
  double min_growth() const;
};

/// Samples strictly before a quench are used; the quench sample is dropped.
MomentTrace moment_trace(const Domain& d, const EvolutionResult& res, const EigenPair& eig, double chi,
                         double lambda);

struct QuenchRun {
  double lambda = 0.0;
  bool quenched = false;
  double t_quench = 0.0;  // extrapolated T_lambda
  double t_lower = 0.0;
  double t_upper = 0.0;
  double final_sup = 0.0;
  EvolutionResult run;
};

struct QuenchSweep {
  double chi = 0.0;
  std::vector<QuenchRun> runs;
  /// Least-squares fit of 1/T = (lambda - lambda0) / C over the quenched runs.
  double fit_C = 0.0;
  double fit_lambda0 = 0.0;
  /// max over quenched runs of (lambda - fit_lambda0) T_lambda.
  double C3 = 0.0;
  bool all_quenched() const;
  bool strictly_decreasing() const;
  /// max(lambda T) / min(lambda T) over quenched runs.
  double lambda_T_spread() const;
};

/// Evolves every lambda (concurrently, see worker_count()) and summarises the
/// quench times.
QuenchSweep quench_sweep(const Domain& d, double chi, const std::vector<double>& lambdas, const DiscreteField& u0,
                         const EvolveOptions& opts);

/// Concurrency cap from MEMS_THREADS, defaulting to the hardware count.
unsigned worker_count();

/// Lower supporting line dE/dt >= (lambda - lambda_fit) / C_fit through the
/// minimal growth rates of a lambda sweep.
struct GrowthFit {
  double C = 0.0;
  double lambda0 = 0.0;
  bool positive = false;
};
GrowthFit fit_moment_growth(const std::vector<double>& lambdas, const std::vector<double>& min_growth);

/// Invariant region lower <= u <= upper for a run started at u0.
struct SandwichCase {
  std::string name;
  double lambda = 0.0;
  DiscreteField u0;
  DiscreteField lower;
  DiscreteField upper;
};

/// The four invariant regions for global solutions (steady supersolution,
/// fold-profile window, lower-branch window, two-sided steady window), with
/// lambda* taken as the lower end of the resolved fold bracket.
std::vector<SandwichCase> sandwich_cases(const NonlocalSolver& solver, double chi);

struct SandwichReport {
  std::string name;
  double lambda = 0.0;
  double max_below = 0.0;  // max (lower - u)_+
  double max_above = 0.0;  // max (u - upper)_+
  double tolerance = 0.0;
  EvolutionStatus status = EvolutionStatus::HorizonReached;
  bool holds() const { return max_below <= tolerance && max_above <= tolerance; }
};

SandwichReport check_sandwich(const Domain& d, double chi, const SandwichCase& c, const EvolveOptions& opts);

/// L1 distance int |u - v| between two fields.
double l1_distance(const Domain& d, const DiscreteField& u, const DiscreteField& v);

}  // namespace mems
