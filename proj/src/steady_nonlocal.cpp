#include "mems/steady_nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mems/error.hpp"

namespace mems {

double capacitance_integral(const Domain& d, const DiscreteField& w) {
  d.check(w);
  const auto vol = d.weights();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += vol[j] / (1.0 - w.values[j]);
  return s;
}

double nonlocal_factor(const Domain& d, double chi, const DiscreteField& u) {
  const double b = 1.0 + chi * capacitance_integral(d, u);
  return b * b;
}

NonlocalSolver::NonlocalSolver(const Domain& d, SteadyBranch branch, SteadyOptions opts)
    : d_(d), branch_(std::move(branch)), opts_(opts) {
  if (branch_.points.empty()) throw Error(ErrorKind::EmptyBranch, "nonlocal solver needs a resolved branch");
}

DiscreteField NonlocalSolver::minimal(double mu, const DiscreteField* below) const {
  return below ? minimal_solution_from(d_, mu, *below, opts_) : minimal_solution(d_, mu, opts_);
}

double NonlocalSolver::h(double chi, double mu) const {
  if (!(mu >= 0.0)) throw Error(ErrorKind::InvalidParams, "mu must be >= 0");
  if (!(chi >= 0.0)) throw Error(ErrorKind::InvalidParams, "chi must be >= 0");
  if (mu == 0.0) return 0.0;
  // Any branch point below mu is a subsolution, which speeds up the solve.
  const DiscreteField* below = nullptr;
  for (const auto& p : branch_.points)
    if (p.lambda <= mu) below = &p.w;
  return mu * nonlocal_factor(d_, chi, minimal(mu, below));
}

double NonlocalSolver::h_max(double chi) const {
  return branch_.fold_lower * nonlocal_factor(d_, chi, branch_.w_star);
}

NonlocalSolution NonlocalSolver::solve(double chi, double lambda) const {
  if (!(chi >= 0.0)) throw Error(ErrorKind::InvalidParams, "chi must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidParams, "lambda must be >= 0");
  NonlocalSolution out;
  out.lambda = lambda;
  out.chi = chi;
  if (lambda == 0.0) {
    out.v = d_.zeros();
    out.capacitance_integral = d_.volume();
    return out;
  }
  const double top = h_max(chi);
  if (lambda > top)
    throw Error(ErrorKind::RootOutOfRange, "lambda exceeds the resolvable range h(lambda*-) = " + std::to_string(top));
  if (lambda == top) {
    out.mu_root = branch_.fold_lower;
    out.v = branch_.w_star;
    out.capacitance_integral = capacitance_integral(d_, out.v);
    return out;
  }

  const double tol = 1e-8 * std::max(1.0, lambda);
  double lo = 0.0, hi = branch_.fold_lower;
  DiscreteField w_lo = d_.zeros();
  for (const auto& p : branch_.points) {
    if (p.lambda * nonlocal_factor(d_, chi, p.w) <= lambda) {
      lo = p.lambda;
      w_lo = p.w;
    } else {
      hi = p.lambda;
      break;
    }
  }

  double best_gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    DiscreteField w = minimal(mid, &w_lo);
    const double hv = mid * nonlocal_factor(d_, chi, w);
    const double gap = std::abs(hv - lambda);
    if (gap < best_gap) {
      best_gap = gap;
      out.mu_root = mid;
      out.v = w;
    }
    if (gap <= 1e-2 * tol || mid == lo || mid == hi) break;
    if (hv < lambda) {
      lo = mid;
      w_lo = std::move(w);
    } else {
      hi = mid;
    }
  }
  if (best_gap > tol) throw Error(ErrorKind::NoConvergence, "bisection on h did not reach the root tolerance");
  out.capacitance_integral = capacitance_integral(d_, out.v);
  return out;
}

ThresholdReport NonlocalSolver::thresholds(double chi) const {
  if (!(chi > 0.0)) throw Error(ErrorKind::InvalidParams, "chi must be > 0");
  ThresholdReport rep;
  rep.lambda_star_local = branch_.lambda_star;
  rep.capacitance_w_star = capacitance_integral(d_, branch_.w_star);
  rep.lambda_star_N = h_max(chi);
  if (d_.spec().kind == DomainKind::Ball && d_.dim() >= 2) rep.lambda_N_upper = nonexistence_upper_bound(d_, chi);
  if (d_.spec().kind == DomainKind::Interval) rep.threshold_1d = global_existence_threshold_1d(d_, chi);
  return rep;
}

double NonlocalSolver::observed_nonexistence_onset(double chi, double ratio) const {
  if (!(ratio > 1.0)) throw Error(ErrorKind::InvalidParams, "grid ratio must exceed 1");
  const double base = 1.0 + chi * d_.volume();
  double lambda = branch_.fold_lower * base * base;
  for (int k = 0; k < 100000; ++k, lambda *= ratio) {
    try {
      (void)solve(chi, lambda);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::RootOutOfRange) return lambda;
      throw;
    }
  }
  throw Error(ErrorKind::NoConvergence, "no nonexistence onset found on the grid");
}

double h_map(const Domain& d, double chi, double mu, const SteadyOptions& opts) {
  if (!(mu >= 0.0)) throw Error(ErrorKind::InvalidParams, "mu must be >= 0");
  if (mu == 0.0) return 0.0;
  return mu * nonlocal_factor(d, chi, minimal_solution(d, mu, opts));
}

NonlocalSolution solve_nonlocal_steady(const Domain& d, double chi, double lambda) {
  return NonlocalSolver(d, pull_in_voltage(d)).solve(chi, lambda);
}

ThresholdReport thresholds(const Domain& d, double chi) {
  return NonlocalSolver(d, pull_in_voltage(d)).thresholds(chi);
}

double nonexistence_upper_bound(const Domain& d, double chi) {
  if (d.spec().kind != DomainKind::Ball || d.dim() < 2)
    throw Error(ErrorKind::UnsupportedDomain, "the convex-domain bound needs a ball with n >= 2");
  const double n = d.dim();
  const double vol = d.volume();
  return (n + 2.0) * (n + 2.0) * d.boundary_measure() / (8.0 * d.convexity_constant() * n) *
         (chi * (2.0 + chi * vol) + 1.0 / vol);
}

double global_existence_threshold_1d(const Domain& d, double chi) {
  if (d.spec().kind != DomainKind::Interval)
    throw Error(ErrorKind::UnsupportedDomain, "the one-dimensional threshold needs an interval");
  const double vol = d.volume();
  return chi * (1.0 + chi * vol) / (2.0 * vol);
}

double nonlocal_residual(const Domain& d, double chi, double lambda, const DiscreteField& v) {
  const auto lap = apply_laplacian(d, v);
  const double factor = nonlocal_factor(d, chi, v);
  double m = 0.0;
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) {
    const double gap = 1.0 - v.values[j];
    m = std::max(m, std::abs(lap.values[j] + lambda / (gap * gap * factor)));
  }
  return m;
}

double refinement_defect(const NonlocalSolver& coarse, const NonlocalSolver& fine, double chi, double lambda) {
  const DomainSpec& c = coarse.domain().spec();
  const DomainSpec& f = fine.domain().spec();
  if (c.kind != f.kind || c.extent != f.extent || c.dim != f.dim || f.resolution != 2 * c.resolution + 1)
    throw Error(ErrorKind::DomainMismatch, "fine grid must halve the coarse spacing");
  const auto vc = coarse.solve(chi, lambda).v;
  const auto vf = fine.solve(chi, lambda).v;
  double m = 0.0;
  for (std::size_t i = 0; i < vc.size(); ++i) m = std::max(m, std::abs(vc.values[i] - vf.values[2 * i]));
  return m;
}

double refinement_defect(const DomainSpec& coarse, double chi, double lambda) {
  DomainSpec fine = coarse;
  fine.resolution = 2 * coarse.resolution + 1;
  const Domain dc = build_domain(coarse);
  const Domain df = build_domain(fine);
  return refinement_defect(NonlocalSolver(dc, pull_in_voltage(dc)), NonlocalSolver(df, pull_in_voltage(df)), chi,
                           lambda);
}

}  // namespace mems
