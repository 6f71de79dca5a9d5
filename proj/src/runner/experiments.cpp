#include "mems/runner/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mems/duhamel.hpp"
#include "mems/error.hpp"
#include "mems/runner/acceptance.hpp"
#include "mems/runner/plot.hpp"

namespace mems::runner {

namespace {

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string le(double value, double bound) { return g(value) + " <= " + g(bound); }

void status_scalars(ResultRecord& r, const EvolutionResult& res) {
  r.scalar("t_end", res.times.back(), "time", "final sample time");
  r.scalar("sup_u_final", res.sup_u.back(), "1", "max of u at the final sample");
  r.scalar("steps", static_cast<double>(res.steps), "1", "accepted time steps");
  r.scalar("converged", res.status == EvolutionStatus::ConvergedToSteady ? 1.0 : 0.0, "bool", "steady state detected");
  r.scalar("quenched", res.status == EvolutionStatus::Quenched ? 1.0 : 0.0, "bool", "sup u reached 1 - quench_tol");
  if (res.status == EvolutionStatus::ConvergedToSteady)
    r.scalar("t_conv", res.t_conv, "time", "first time steadiness was detected");
  if (res.status == EvolutionStatus::Quenched) {
    r.scalar("quench_lower", res.quench_lower, "time", "last time with sup u below the quench level");
    r.scalar("quench_upper", res.quench_upper, "time", "first time with sup u at the quench level");
    r.scalar("quench_time", res.quench_estimate, "time", "extrapolated quenching time");
  }
}

void basic_run_verdicts(ResultRecord& r, const EvolutionResult& res) {
  const double tol = res.discrete_tolerance();
  double min_u = 0.0;
  for (const auto& s : res.snapshots)
    for (double v : s.u.values) min_u = std::min(min_u, v);
  r.verdict("nonnegative", min_u >= -tol, "min u = " + g(min_u) + " >= -" + g(tol));
  std::size_t n = res.sup_u.size();
  if (res.status == EvolutionStatus::Quenched) --n;
  const double top = n ? *std::max_element(res.sup_u.begin(), res.sup_u.begin() + n) : 0.0;
  r.verdict("below-one-before-quench", top < 1.0, "max sup u = " + g(top) + " < 1");
}

ResultRecord steady_branch(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const SteadyBranch br = pull_in_voltage(d);
  r.scalar("lambda_star", br.lambda_star, "1", "pull-in voltage (fold bracket midpoint)");
  r.scalar("fold_lower", br.fold_lower, "1", "largest lambda with a resolved minimal solution");
  r.scalar("fold_upper", br.fold_upper, "1", "smallest lambda without one");
  r.scalar("mu1", br.mu1, "1", "principal Dirichlet eigenvalue");
  r.scalar("sup_w_star", max_value(w_star(br)), "1", "max of the fold profile");
  Series s{{"lambda", "sup_w", "lin_eig"}, {{}, {}, {}}};
  for (const auto& p : br.points) {
    s.data[0].push_back(p.lambda);
    s.data[1].push_back(p.sup_w);
    s.data[2].push_back(p.lin_eig);
  }
  r.series["branch"] = s;
  const double width = br.fold_upper - br.fold_lower;
  r.verdict("fold-resolved", width <= 1e-6 * br.fold_upper, "bracket width " + le(width, 1e-6 * br.fold_upper));
  bool monotone = true, stable = true;
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    if (i && !(br.points[i].sup_w > br.points[i - 1].sup_w)) monotone = false;
    if (!(br.points[i].lin_eig > 0.0)) stable = false;
  }
  r.verdict("branch-increasing", monotone, "max w increases along the branch");
  r.verdict("branch-stable", stable, "linearized eigenvalue positive below the fold");
  r.verdict("fold-profile-below-one", max_value(w_star(br)) < 1.0, "max w* = " + g(max_value(w_star(br))));
  return r;
}

ResultRecord nonlocal_steady(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const NonlocalSolver solver(d, pull_in_voltage(d));
  const NonlocalSolution sol = solver.solve(cfg.chi, cfg.lambda);
  const double h_gap = cfg.lambda > 0.0 ? std::abs(solver.h(cfg.chi, sol.mu_root) - cfg.lambda) : 0.0;
  const double res = nonlocal_residual(d, cfg.chi, cfg.lambda, sol.v);
  r.scalar("mu_root", sol.mu_root, "1", "root of h(mu) = lambda");
  r.scalar("capacitance_integral", sol.capacitance_integral, "length^n", "integral of 1/(1 - v)");
  r.scalar("sup_v", max_value(sol.v), "1", "max of the steady state");
  r.scalar("h_gap", h_gap, "1", "|h(mu_root) - lambda|");
  r.scalar("residual", res, "1", "max discrete residual of the nonlocal equation");
  r.scalar("h_max", solver.h_max(cfg.chi), "1", "largest resolvable lambda");
  const auto nodes = d.nodes();
  r.series["profile"] = Series{{"x", "v"}, {{nodes.begin(), nodes.end()}, sol.v.values}};
  const double tol = 1e-8 * std::max(1.0, cfg.lambda);
  r.verdict("root-accuracy", h_gap <= tol, le(h_gap, tol));
  r.verdict("equation-residual", res <= 1e-6, le(res, 1e-6));
  return r;
}

ResultRecord thresholds_experiment(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const SteadyBranch br = pull_in_voltage(d);
  const NonlocalSolver solver(d, br);
  const ThresholdReport th = solver.thresholds(cfg.chi);
  const double onset = solver.observed_nonexistence_onset(cfg.chi);
  const double vol = d.volume();
  const double lower = th.lambda_star_local * (1.0 + cfg.chi * vol) * (1.0 + cfg.chi * vol);
  r.scalar("lambda_star_local", th.lambda_star_local, "1", "local pull-in voltage");
  r.scalar("lambda_star_lower", lower, "1", "lambda* (1 + chi |Omega|)^2");
  r.scalar("lambda_star_N", th.lambda_star_N, "1", "lambda* (1 + chi int 1/(1 - w*))^2");
  r.scalar("capacitance_w_star", th.capacitance_w_star, "length^n", "integral of 1/(1 - w*)");
  r.scalar("observed_onset", onset, "1", "first lambda without a resolved nonlocal steady state");
  if (th.lambda_N_upper) r.scalar("lambda_N_upper", *th.lambda_N_upper, "1", "convex-domain nonexistence bound");
  if (th.threshold_1d) r.scalar("threshold_1d", *th.threshold_1d, "1", "one-dimensional global-existence threshold");
  Series s{{"lambda", "sup_w", "lin_eig"}, {{}, {}, {}}};
  for (const auto& p : br.points) {
    s.data[0].push_back(p.lambda);
    s.data[1].push_back(p.sup_w);
    s.data[2].push_back(p.lin_eig);
  }
  r.series["branch"] = s;
  r.verdict("lower-below-existence", lower <= th.lambda_star_N, le(lower, th.lambda_star_N));
  r.verdict("existence-below-onset", th.lambda_star_N <= onset, le(th.lambda_star_N, onset));
  if (th.lambda_N_upper)
    r.verdict("onset-below-bound", onset <= *th.lambda_N_upper, le(onset, *th.lambda_N_upper));
  else
    r.skip("onset-below-bound", "the nonexistence bound needs a ball with n >= 2");
  return r;
}

void add_global_checks(ResultRecord& r, const ExperimentConfig& cfg, const Domain& d, const EvolutionResult& res) {
  const bool zero_start = cfg.initial.kind == InitialKind::Zero;
  if (d.spec().kind == DomainKind::Interval && cfg.chi > 0.0 && zero_start &&
      cfg.lambda < global_existence_threshold_1d(d, cfg.chi)) {
    const GlobalBoundsReport t = global_bounds_check(d, res, cfg.chi, cfg.lambda);
    r.scalar("max_gradient_sq", t.max_gradient_sq, "1", "max over samples of int u_x^2");
    r.verdict("gradient-bound", t.gradient_ok, le(t.max_gradient_sq, t.gradient_bound + t.tolerance));
    r.verdict("sup-bound", t.sup_ok, le(t.max_sup, t.sup_bound + t.tolerance));
    r.verdict("steady-envelope", t.envelope_ok, le(t.final_sup, t.steady_envelope + t.tolerance));
  } else {
    r.skip("global-existence-bounds", "needs an interval, chi > 0, u0 = 0 and lambda below the threshold");
  }
  if (res.status == EvolutionStatus::ConvergedToSteady) {
    DiscreteField target = d.zeros();
    if (cfg.lambda > 0.0)
      target = cfg.chi > 0.0 ? solve_nonlocal_steady(d, cfg.chi, cfg.lambda).v : minimal_solution(d, cfg.lambda);
    const auto& u = res.snapshots.back().u;
    double dev = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) dev = std::max(dev, std::abs(u.values[j] - target.values[j]));
    r.scalar("steady_deviation", dev, "1", "max |u(t_end) - steady state|");
    r.verdict("steady-limit", dev <= 1e-4, le(dev, 1e-4));
  } else {
    r.skip("steady-limit", "the run did not reach a steady state");
  }
}

ResultRecord evolve_experiment(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const DiscreteField u0 = initial_field(d, cfg.initial);
  const EvolutionResult res = evolve(d, cfg.chi, cfg.lambda, u0, cfg.evolve, describe(cfg.initial));
  r.series["time"] = time_series(d, res, principal_eigenpair(d));
  status_scalars(r, res);
  basic_run_verdicts(r, res);
  add_global_checks(r, cfg, d, res);
  return r;
}

ResultRecord picard_experiment(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const DiscreteField u0 = initial_field(d, cfg.initial);
  PicardOptions po;
  po.time_steps = cfg.picard_time_steps;
  const PicardRun run = picard_iterate(d, cfg.chi, cfg.lambda, u0, cfg.picard_iterations, po);
  const PicardRun free = picard_iterate(d, 0.0, cfg.lambda, u0, cfg.picard_iterations, po);
  const double tol = run.discrete_tolerance();

  EvolveOptions eo = cfg.evolve;
  eo.dt_init = run.dt;
  eo.t_max = run.horizon_T;
  eo.sample_stride = 1;
  eo.stop_on_steady = false;
  const EvolutionResult res = evolve(d, cfg.chi, cfg.lambda, u0, eo, describe(cfg.initial));
  r.series["time"] = time_series(d, res, principal_eigenpair(d));

  const SpaceTimeField& last = run.iterates.back();
  double agree = 0.0;
  const std::size_t n = std::min(last.slices.size(), res.snapshots.size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < d.size(); ++j)
      agree = std::max(agree, std::abs(last.slices[k].values[j] - res.snapshots[k].u.values[j]));
  double majorant = 0.0;
  for (std::size_t k = 0; k < std::min(run.iterates.size(), free.iterates.size()); ++k)
    for (std::size_t m = 0; m < run.iterates[k].slices.size(); ++m)
      for (std::size_t j = 0; j < d.size(); ++j)
        majorant = std::max(majorant, run.iterates[k].slices[m].values[j] - free.iterates[k].slices[m].values[j]);
  double top = 0.0;
  for (const auto& it : run.iterates)
    for (const auto& s : it.slices) top = std::max(top, max_value(s));

  r.scalar("horizon_T", run.horizon_T, "time", "existence horizon (1 - a)^3 / (16 lambda)");
  r.scalar("ceiling", run.a_bound, "1", "(1 + a) / 2");
  r.scalar("dt", run.dt, "time", "time step of the Picard grid");
  r.scalar("iterates", static_cast<double>(run.iterates.size()), "1", "Picard iterates computed");
  r.scalar("stepper_gap", agree, "1", "max |u_k - u_evolve| on the horizon");
  r.verdict("ceiling", top <= run.a_bound + tol, le(top, run.a_bound + tol));
  r.verdict("majorant", majorant <= tol, "max (u_k - u_k|chi=0) = " + le(majorant, tol));
  r.verdict("converged", run.converged_at.has_value(),
            run.converged_at ? "at iterate " + std::to_string(*run.converged_at) : "no convergence");
  r.verdict("matches-stepper", n == res.snapshots.size() && agree <= tol, le(agree, tol));
  return r;
}

ResultRecord energy_experiment(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const DiscreteField u0 = initial_field(d, cfg.initial);
  const EvolutionResult res = evolve(d, cfg.chi, cfg.lambda, u0, cfg.evolve, describe(cfg.initial));
  r.series["time"] = time_series(d, res, principal_eigenpair(d));
  status_scalars(r, res);
  const EnergyLedger ledger = energy_ledger(d, res, 0.0);
  const double drift = ledger.max_relative_drift();
  const double excess = ledger.max_cap_excess(d.volume());
  r.scalar("lyapunov_drift", drift, "1", "max relative change of the Lyapunov sum");
  r.scalar("energy_cap", ledger.cap(d.volume()), "energy", "initial Dirichlet energy + lambda / (chi (1 + chi |Omega|))");
  r.scalar("cap_excess", excess, "energy", "max of dissipation + Dirichlet energy - cap");
  if (res.status == EvolutionStatus::Quenched)
    r.skip("lyapunov-constant", "the identity is checked on non-quenching runs");
  else
    r.verdict("lyapunov-constant", drift <= 1e-4, le(drift, 1e-4));
  r.verdict("energy-cap", excess <= 1e-3, "excess " + le(excess, 1e-3));
  return r;
}

ResultRecord quench_experiment(const ExperimentConfig& cfg, ResultRecord r) {
  const Domain d = build_domain(cfg.domain);
  const DiscreteField u0 = initial_field(d, cfg.initial);
  const QuenchSweep sw = quench_sweep(d, cfg.chi, cfg.lambdas, u0, cfg.evolve);
  Series s{{"lambda", "T", "T_lower", "T_upper", "quenched"}, {{}, {}, {}, {}, {}}};
  int quenched = 0;
  for (const auto& q : sw.runs) {
    s.data[0].push_back(q.lambda);
    s.data[1].push_back(q.quenched ? q.t_quench : NAN);
    s.data[2].push_back(q.quenched ? q.t_lower : NAN);
    s.data[3].push_back(q.quenched ? q.t_upper : NAN);
    s.data[4].push_back(q.quenched ? 1.0 : 0.0);
    quenched += q.quenched;
  }
  r.series["quench"] = s;
  r.scalar("quenched_runs", quenched, "1", "runs that quenched before t_max");
  r.scalar("fit_C", sw.fit_C, "1", "C in T = C / (lambda - lambda0)");
  r.scalar("fit_lambda0", sw.fit_lambda0, "1", "lambda0 in T = C / (lambda - lambda0)");
  r.scalar("C3", sw.C3, "1", "max (lambda - lambda0) T over quenched runs");
  r.scalar("lambda_T_spread", sw.lambda_T_spread(), "1", "max lambda T / min lambda T");

  const NonlocalSolver solver(d, pull_in_voltage(d));
  const double vol = d.volume();
  const double global = solver.branch().fold_lower * (1.0 + cfg.chi * vol) * (1.0 + cfg.chi * vol);
  bool below_ok = true, any_below = false;
  const auto& wstar = w_star(solver.branch());
  bool dominated = true;
  for (std::size_t j = 0; j < u0.size(); ++j) dominated = dominated && u0.values[j] <= wstar.values[j];
  for (const auto& q : sw.runs) {
    if (q.lambda <= global && dominated) {
      any_below = true;
      below_ok = below_ok && !q.quenched;
    }
  }
  if (any_below)
    r.verdict("no-quench-below-threshold", below_ok, "runs with lambda <= " + g(global) + " stay below 1");
  else
    r.skip("no-quench-below-threshold", "no run lies in the guaranteed global-existence range");
  const double top = solver.h_max(cfg.chi);
  const bool all_above = std::all_of(sw.runs.begin(), sw.runs.end(), [&](const QuenchRun& q) { return q.lambda > top; });
  if (cfg.chi * vol < 1.0 && all_above && !sw.runs.empty())
    r.verdict("all-quenched", sw.all_quenched(), std::to_string(quenched) + " of " + std::to_string(sw.runs.size()));
  else
    r.skip("all-quenched", "needs chi |Omega| < 1 and every lambda above the steady range");
  if (quenched >= 2) {
    r.verdict("quench-time-decreasing", sw.strictly_decreasing(), "T strictly decreasing in lambda");
    r.verdict("lambda-T-bounded", sw.lambda_T_spread() <= 3.0, le(sw.lambda_T_spread(), 3.0));
  } else {
    r.skip("quench-time-decreasing", "fewer than two runs quenched");
    r.skip("lambda-T-bounded", "fewer than two runs quenched");
  }
  return r;
}

ResultRecord verify_all(const ExperimentConfig&, ResultRecord r, const std::filesystem::path& out_dir) {
  AcceptanceOptions opts;
  opts.work_dir = out_dir / "scratch";
  for (const auto& c : run_acceptance(opts))
    r.verdict("criterion-" + std::to_string(c.id) + " " + c.name, c.passed, c.detail);
  return r;
}

}  // namespace

Series time_series(const Domain& d, const EvolutionResult& res, const EigenPair& eig) {
  Series s;
  s.columns = time_series_columns();
  s.data.assign(s.columns.size(), {});
  const auto terms = energy_terms(d, res);
  const auto w = d.weights();
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    const auto& u = res.snapshots[k].u;
    double e = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) e += w[j] * u.values[j] * eig.phi1.values[j];
    s.data[0].push_back(res.snapshots[k].t);
    s.data[1].push_back(res.sup_u[k]);
    s.data[2].push_back(e);
    s.data[3].push_back(terms[k].dirichlet);
    s.data[4].push_back(terms[k].dissipation_cum);
    s.data[5].push_back(terms[k].nonlocal_pot);
  }
  return s;
}

ResultRecord run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  ResultRecord r;
  r.experiment = cfg.experiment;
  r.config = echo(cfg);
  try {
    if (cfg.experiment == "steady-branch") return steady_branch(cfg, std::move(r));
    if (cfg.experiment == "nonlocal-steady") return nonlocal_steady(cfg, std::move(r));
    if (cfg.experiment == "thresholds") return thresholds_experiment(cfg, std::move(r));
    if (cfg.experiment == "evolve") return evolve_experiment(cfg, std::move(r));
    if (cfg.experiment == "picard") return picard_experiment(cfg, std::move(r));
    if (cfg.experiment == "energy") return energy_experiment(cfg, std::move(r));
    if (cfg.experiment == "quench-sweep") return quench_experiment(cfg, std::move(r));
    if (cfg.experiment == "verify-all") return verify_all(cfg, std::move(r), out_dir);
  } catch (const Error& e) {
    ResultRecord failed;
    failed.experiment = cfg.experiment;
    failed.config = echo(cfg);
    failed.verdict("solver", false, std::string(to_string(e.kind())) + ": " + e.what());
    return failed;
  }
  throw Error(ErrorKind::ConfigError, "unknown experiment '" + cfg.experiment + "'");
}

int run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  ResultRecord r = run_experiment(cfg, out_dir);
  const auto plots = plan_plots(r);
  if (!cfg.plots)
    r.skip("plots", "disabled by output.plots");
  else if (plots.empty())
    r.skip("plots", "no series to plot");
  write_record(r, out_dir / "record.json");
  if (const auto it = r.series.find("time"); it != r.series.end()) write_csv(it->second, out_dir / "series.csv");
  if (cfg.plots) emit_plots(r, out_dir);
  return r.all_passed() ? 0 : 1;
}

}  // namespace mems::runner
