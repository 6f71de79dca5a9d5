#include "mems/steady_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mems/error.hpp"
#include "mems/spectral.hpp"

namespace mems {

namespace {

struct LocalProblem {
  const Domain& d;
  double lambda;
  std::size_t lo;
  std::span<const double> vol;

  LocalProblem(const Domain& dom, double lam)
      : d(dom), lambda(lam), lo(dom.first_unknown()), vol(dom.weights().subspan(lo, dom.unknown_count())) {}

  double forcing(double w) const { return lambda / ((1.0 - w) * (1.0 - w)); }

  // Weighted residual V f(w) - S w on unknowns and its max-norm per volume.
  double residual(std::span<const double> w, std::vector<double>& r) const {
    r = d.stiffness().multiply(w);
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = vol[i] * forcing(w[i]) - r[i];
      m = std::max(m, std::abs(r[i]) / vol[i]);
    }
    return m;
  }
};

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidParams, "lambda must be >= 0");
}

}  // namespace

double steady_residual(const Domain& d, double lambda, const DiscreteField& w) {
  const auto lap = apply_laplacian(d, w);
  double m = 0.0;
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j)
    m = std::max(m, std::abs(lap.values[j] + lambda / ((1.0 - w.values[j]) * (1.0 - w.values[j]))));
  return m;
}

DiscreteField minimal_solution(const Domain& d, double lambda, const SteadyOptions& opts) {
  return minimal_solution_from(d, lambda, d.zeros(), opts);
}

DiscreteField minimal_solution_from(const Domain& d, double lambda, const DiscreteField& subsolution,
                                    const SteadyOptions& opts, SteadySolveStats* stats) {
  check_lambda(lambda);
  d.check(subsolution);
  if (lambda == 0.0) return d.zeros();

  const LocalProblem prob(d, lambda);
  const SpdFactorization laplace(d.stiffness());
  const double tol = opts.residual_tol * std::max(1.0, lambda);
  const double ceiling = 1.0 - opts.touchdown_margin;

  std::vector<double> w = restrict_unknowns(d, subsolution);
  std::vector<double> r, next(w.size()), jac_shift(w.size());
  SteadySolveStats local;
  double res = prob.residual(w, r);
  auto touched_down = [&](const std::vector<double>& x) {
    for (double v : x)
      if (!(v < ceiling)) return true;
    return false;
  };

  auto newton_step = [&]() -> bool {
    for (std::size_t i = 0; i < w.size(); ++i)
      jac_shift[i] = -prob.vol[i] * 2.0 * lambda / std::pow(1.0 - w[i], 3);
    auto delta = solve_spd(d.stiffness().plus_diagonal(jac_shift), r);
    if (!delta) return false;
    for (std::size_t i = 0; i < w.size(); ++i) next[i] = w[i] + (*delta)[i];
    return true;
  };

  while (res > tol) {
    if (local.monotone_steps + local.newton_steps >= opts.max_iterations)
      throw Error(ErrorKind::NoSteadyState, "iteration cap reached (lambda beyond the fold?)");
    bool stepped = opts.newton_acceleration && newton_step();
    if (stepped) {
      ++local.newton_steps;
    } else {
      for (std::size_t i = 0; i < w.size(); ++i) next[i] = prob.vol[i] * prob.forcing(w[i]);
      laplace.solve_in_place(next);
      ++local.monotone_steps;
    }
    if (touched_down(next)) throw Error(ErrorKind::NoSteadyState, "iterate reached touchdown");
    std::swap(w, next);
    res = prob.residual(w, r);
  }

  if (opts.newton_acceleration) {
    // Quadratic convergence: a few extra steps bring the residual to rounding level.
    for (int k = 0; k < 4; ++k) {
      if (!newton_step()) break;
      std::vector<double> r_next;
      const double res_next = prob.residual(next, r_next);
      if (!(res_next < res) || touched_down(next)) break;
      std::swap(w, next);
      r = std::move(r_next);
      res = res_next;
      ++local.newton_steps;
    }
  }
  local.residual = res;
  if (stats) *stats = local;
  return extend_unknowns(d, w);
}

MonotoneRun monotone_iteration(const Domain& d, double lambda, const DiscreteField& start, const SteadyOptions& opts,
                               const std::function<void(const DiscreteField&)>& observer) {
  check_lambda(lambda);
  d.check(start);
  const LocalProblem prob(d, lambda);
  const SpdFactorization laplace(d.stiffness());
  const double tol = opts.residual_tol * std::max(1.0, lambda);
  const double ceiling = 1.0 - opts.touchdown_margin;

  std::vector<double> w = restrict_unknowns(d, start), r;
  MonotoneRun run;
  double res = prob.residual(w, r);
  while (res > tol && run.iterations < opts.max_iterations) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = prob.vol[i] * prob.forcing(w[i]);
    laplace.solve_in_place(w);
    ++run.iterations;
    if (*std::max_element(w.begin(), w.end()) >= ceiling)
      throw Error(ErrorKind::NoSteadyState, "iterate reached touchdown");
    if (observer) observer(extend_unknowns(d, w));
    res = prob.residual(w, r);
  }
  run.converged = res <= tol;
  run.w = extend_unknowns(d, w);
  return run;
}

SteadyBranch pull_in_voltage(const Domain& d, const BranchOptions& opts) {
  SteadyBranch branch;
  branch.mu1 = principal_eigenpair(d).mu1;
  double step = opts.initial_step > 0.0 ? opts.initial_step : 0.05 * branch.mu1;

  DiscreteField w_lo = d.zeros();
  branch.points.push_back({0.0, w_lo, 0.0, branch.mu1});
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  while (true) {
    double candidate;
    if (std::isfinite(hi)) {
      if (hi - lo <= opts.fold_rel_tol * hi) break;
      candidate = 0.5 * (lo + hi);
    } else {
      candidate = lo + step;
    }
    try {
      DiscreteField w = minimal_solution_from(d, candidate, w_lo, opts.solver);
      const double lin = linearized_eigenvalue(d, candidate, w);
      branch.points.push_back({candidate, w, max_value(w), lin});
      lo = candidate;
      w_lo = std::move(w);
      if (!std::isfinite(hi) && lin < opts.slow_eig_fraction * branch.mu1) step *= 0.5;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoSteadyState) throw;
      hi = candidate;
    }
  }
  branch.fold_lower = lo;
  branch.fold_upper = hi;
  branch.lambda_star = 0.5 * (lo + hi);
  branch.w_star = w_lo;
  return branch;
}

const DiscreteField& w_star(const SteadyBranch& branch) {
  if (branch.points.empty()) throw Error(ErrorKind::EmptyBranch, "branch has no points");
  return branch.points.back().w;
}

}  // namespace mems
