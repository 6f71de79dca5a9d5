#include "mems/runner/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "mems/diagnostics.hpp"
#include "mems/duhamel.hpp"
#include "mems/error.hpp"
#include "mems/runner/experiments.hpp"
#include "mems/verify/shooting.hpp"

namespace mems::runner {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Square of the first zero of the Bessel function J0.
constexpr double kJ01Squared = 5.783185962946784;

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Checks {
  bool ok = true;
  std::string text;
  void add(const std::string& what, bool pass) {
    ok = ok && pass;
    text += (text.empty() ? "" : "; ") + what + (pass ? "" : " [FAIL]");
  }
};

CriterionResult finish(int id, const std::string& name, const Checks& c) { return {id, name, c.ok, c.text, 0.0}; }

CriterionResult eigenpairs(const AcceptanceOptions&) {
  Checks c;
  const auto t0 = Clock::now();
  const Domain iv = build_domain(DomainSpec::interval(1.0, 512));
  const EigenPair ei = principal_eigenpair(iv);
  const double t_interval = seconds_since(t0);
  const Domain ball = build_domain(DomainSpec::ball(1.0, 2, 512));
  const EigenPair eb = principal_eigenpair(ball);
  const double e1 = rel(ei.mu1, std::numbers::pi * std::numbers::pi / 4.0);
  const double e2 = rel(eb.mu1, kJ01Squared);
  const double m1 = std::abs(integrate(iv, ei.phi1) - 1.0);
  const double m2 = std::abs(integrate(ball, eb.phi1) - 1.0);
  c.add("interval mu1 rel err " + g(e1) + " <= 1e-3", e1 <= 1e-3);
  c.add("disk mu1 rel err " + g(e2) + " <= 1e-3", e2 <= 1e-3);
  c.add("|int phi1 - 1| " + g(std::max(m1, m2)) + " <= 1e-8", std::max(m1, m2) <= 1e-8);
  c.add("M=512 solve under 1 s", t_interval < 1.0);
  return finish(1, "principal eigenpair", c);
}

CriterionResult pull_in(const AcceptanceOptions&) {
  Checks c;
  const auto t0 = Clock::now();
  const int m = 255;
  const double li = pull_in_voltage(build_domain(DomainSpec::interval(1.0, m))).lambda_star;
  const double lb1 = pull_in_voltage(build_domain(DomainSpec::ball(1.0, 2, m))).lambda_star;
  const double lb2 = pull_in_voltage(build_domain(DomainSpec::ball(2.0, 2, m))).lambda_star;
  const double oi = oracle::shooting_pull_in(1, 1.0).lambda_star;
  const double ob = oracle::shooting_pull_in(2, 1.0).lambda_star;
  const double elapsed = seconds_since(t0);
  c.add("interval " + g(li) + " vs shooting " + g(oi) + " rel " + g(rel(li, oi)), rel(li, oi) <= 1e-3);
  c.add("disk " + g(lb1) + " vs shooting " + g(ob) + " rel " + g(rel(lb1, ob)), rel(lb1, ob) <= 1e-3);
  c.add("radius-2 scaling rel " + g(rel(lb2, lb1 / 4.0)), rel(lb2, lb1 / 4.0) <= 1e-3);
  c.add("under 30 s", elapsed < 30.0);
  return finish(2, "pull-in voltage", c);
}

CriterionResult nonlocal_root(const AcceptanceOptions&) {
  Checks c;
  const Domain d1 = build_domain(DomainSpec::interval(1.0, 127));
  const Domain d2 = build_domain(DomainSpec::interval(1.0, 255));
  const Domain d3 = build_domain(DomainSpec::interval(1.0, 511));
  const NonlocalSolver s1(d1, pull_in_voltage(d1));
  const NonlocalSolver s2(d2, pull_in_voltage(d2));
  const NonlocalSolver s3(d3, pull_in_voltage(d3));
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> chi_dist(0.05, 2.0), frac_dist(0.05, 0.95);
  double worst_gap = 0.0, ratio_lo = INFINITY, ratio_hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double chi = chi_dist(rng);
    const double lambda = frac_dist(rng) * std::min({s1.h_max(chi), s2.h_max(chi), s3.h_max(chi)});
    const NonlocalSolution sol = s2.solve(chi, lambda);
    worst_gap = std::max(worst_gap, std::abs(s2.h(chi, sol.mu_root) - lambda) / std::max(1.0, lambda));
    const double ratio = refinement_defect(s1, s2, chi, lambda) / refinement_defect(s2, s3, chi, lambda);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
  }
  c.add("max |h(mu) - lambda| / max(1, lambda) " + g(worst_gap) + " <= 1e-8", worst_gap <= 1e-8);
  c.add("defect ratio under doubling in [" + g(ratio_lo) + ", " + g(ratio_hi) + "] within [3.5, 4.5]",
        ratio_lo >= 3.5 && ratio_hi <= 4.5);
  return finish(3, "nonlocal root", c);
}

CriterionResult ordering(const AcceptanceOptions&) {
  Checks c;
  const Domain d = build_domain(DomainSpec::ball(1.0, 2, 255));
  const NonlocalSolver solver(d, pull_in_voltage(d));
  for (double chi : {0.05, 0.1, 0.2}) {
    const ThresholdReport th = solver.thresholds(chi);
    const double onset = solver.observed_nonexistence_onset(chi);
    const double lower = th.lambda_star_local * std::pow(1.0 + chi * d.volume(), 2);
    const double upper = *th.lambda_N_upper;
    const bool chain = lower <= th.lambda_star_N && th.lambda_star_N <= onset && onset <= upper;
    c.add("chi " + g(chi) + ": " + g(lower) + " <= " + g(th.lambda_star_N) + " <= " + g(onset) + " <= " + g(upper),
          chain);
  }
  const double bound = nonexistence_upper_bound(d, 0.1);
  c.add("bound at chi 0.1 = " + g(bound) + " vs 3.4540", std::abs(bound - 3.4540) <= 1e-3);
  return finish(4, "threshold ordering", c);
}

CriterionResult energy(const AcceptanceOptions&) {
  Checks c;
  const auto t0 = Clock::now();
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  EvolveOptions o;
  o.dt_init = 1e-3;
  o.t_max = 10.0;
  const EvolutionResult res = evolve(d, 1.0, 0.5, d.zeros(), o, "zero");
  const EnergyLedger ledger = energy_ledger(d, res, 0.0);
  const double elapsed = seconds_since(t0);
  const double drift = ledger.max_relative_drift();
  const double cap = ledger.cap(d.volume());
  double top = 0.0;
  for (const auto& s : ledger.samples) top = std::max(top, s.dissipation_cum + s.dirichlet);
  c.add("Lyapunov drift " + g(drift) + " <= 1e-4", drift <= 1e-4 && res.status != EvolutionStatus::Quenched);
  c.add("dissipation + Dirichlet " + g(top) + " <= " + g(cap) + " + 1e-3", top <= cap + 1e-3);
  c.add("cap " + g(cap) + " = 0.5/3", std::abs(cap - 0.5 / 3.0) <= 1e-12);
  c.add("under 10 s", elapsed < 10.0);
  return finish(5, "energy identity", c);
}

CriterionResult duhamel(const AcceptanceOptions&) {
  Checks c;
  for (const DomainSpec& spec : {DomainSpec::interval(1.0, 128), DomainSpec::ball(1.0, 2, 128)}) {
    const Domain d = build_domain(spec);
    const std::string tag = spec.kind == DomainKind::Interval ? "interval" : "disk";
    DiscreteField u0 = principal_eigenpair(d).phi1;
    const double m = max_value(u0);
    for (double& v : u0.values) v *= 0.5 / m;
    const double chi = 1.0, lambda = 0.5;
    PicardRun run, free;
    try {
      run = picard_iterate(d, chi, lambda, u0, 30);
      free = picard_iterate(d, 0.0, lambda, u0, 30);
    } catch (const Error& e) {
      c.add(tag + ": " + e.what(), false);
      continue;
    }
    const double tol = run.discrete_tolerance();
    EvolveOptions o;
    o.dt_init = run.dt;
    o.t_max = run.horizon_T;
    o.stop_on_steady = false;
    const EvolutionResult res = evolve(d, chi, lambda, u0, o, "picard");
    const SpaceTimeField& last = run.iterates.back();
    double gap = 0.0;
    const bool same_grid = last.slices.size() == res.snapshots.size();
    for (std::size_t k = 0; same_grid && k < last.slices.size(); ++k)
      for (std::size_t j = 0; j < d.size(); ++j)
        gap = std::max(gap, std::abs(last.slices[k].values[j] - res.snapshots[k].u.values[j]));
    double top = 0.0, majorant = 0.0;
    for (std::size_t k = 0; k < run.iterates.size(); ++k) {
      for (std::size_t s = 0; s < run.iterates[k].slices.size(); ++s) {
        top = std::max(top, max_value(run.iterates[k].slices[s]));
        const auto& hi = free.iterates[std::min(k, free.iterates.size() - 1)].slices[s];
        for (std::size_t j = 0; j < d.size(); ++j)
          majorant = std::max(majorant, run.iterates[k].slices[s].values[j] - hi.values[j]);
      }
    }
    c.add(tag + " stepper gap " + g(gap) + " <= " + g(tol), same_grid && gap <= tol);
    c.add(tag + " max " + g(top) + " <= (1 + a)/2 + tol = " + g(run.a_bound + tol), top <= run.a_bound + tol);
    c.add(tag + " u_k(chi) - u_k(0) <= " + g(majorant), majorant <= tol);
    c.add(tag + " iterates converged", run.converged_at.has_value());
  }
  return finish(6, "Duhamel cross-validation", c);
}

CriterionResult global_existence(const AcceptanceOptions&) {
  Checks c;
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  EvolveOptions o;
  o.dt_init = 1e-3;
  o.t_max = 50.0;
  o.stop_on_steady = false;
  const EvolutionResult res = evolve(d, 1.0, 0.5, d.zeros(), o, "zero");
  const GlobalBoundsReport t = global_bounds_check(d, res, 1.0, 0.5, 1e-3);
  c.add("no quench to t = " + g(res.times.back()), res.status != EvolutionStatus::Quenched && res.times.back() >= 50.0 - 1e-9);
  c.add("sup u " + g(t.max_sup) + " <= 0.8165 + 1e-3", t.max_sup <= 0.8165 + 1e-3);
  c.add("int u_x^2 " + g(t.max_gradient_sq) + " <= 0.3333 + 1e-3", t.max_gradient_sq <= 0.3333 + 1e-3);
  c.add("bounds from the one-dimensional estimate hold", t.all_ok());
  double dev = INFINITY;
  try {
    dev = steady_limit_check(res, solve_nonlocal_steady(d, 1.0, 0.5));
  } catch (const Error& e) {
    c.add(e.what(), false);
  }
  c.add("||u(t_end) - v||_inf " + g(dev) + " <= 1e-4", dev <= 1e-4);
  return finish(7, "global existence and steady limit", c);
}

CriterionResult sandwich(const AcceptanceOptions&) {
  Checks c;
  struct Case {
    DomainSpec spec;
    double chi;
  };
  for (const Case& k : {Case{DomainSpec::interval(1.0, 128), 0.5}, Case{DomainSpec::interval(1.0, 128), 1.0},
                        Case{DomainSpec::ball(1.0, 2, 128), 1.0}}) {
    const Domain d = build_domain(k.spec);
    const NonlocalSolver solver(d, pull_in_voltage(d));
    EvolveOptions o;
    o.dt_init = 1e-3;
    o.t_max = 20.0;
    const std::string tag = (k.spec.kind == DomainKind::Interval ? "interval" : "disk") + std::string(" chi ") + g(k.chi);
    for (const auto& sc : sandwich_cases(solver, k.chi)) {
      const SandwichReport rep = check_sandwich(d, k.chi, sc, o);
      c.add(tag + " " + rep.name + " below " + g(rep.max_below) + " above " + g(rep.max_above), rep.holds());
    }
  }
  return finish(8, "sandwich invariance", c);
}

CriterionResult quenching(const AcceptanceOptions&) {
  Checks c;
  const auto t0 = Clock::now();
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  EvolveOptions o;
  o.dt_init = 1e-3;
  o.t_max = 10.0;
  const QuenchSweep sw = quench_sweep(d, 0.4, {5.0, 10.0, 20.0, 40.0}, d.zeros(), o);
  std::string ts;
  for (const auto& r : sw.runs) ts += (ts.empty() ? "" : ", ") + g(r.t_quench);
  c.add("all quench (T = " + ts + ")", sw.all_quenched());
  c.add("T strictly decreasing", sw.strictly_decreasing());
  c.add("lambda T spread " + g(sw.lambda_T_spread()) + " <= 3", sw.lambda_T_spread() <= 3.0);

  const Domain ball = build_domain(DomainSpec::ball(1.0, 2, 128));
  EvolveOptions ob;
  ob.dt_init = 1e-4;
  ob.t_max = 10.0;
  const EvolutionResult res = evolve(ball, 0.2, 20.0, ball.zeros(), ob, "zero");
  const MomentTrace tr = moment_trace(ball, res, principal_eigenpair(ball), 0.2, 20.0);
  c.add("disk run quenches", res.status == EvolutionStatus::Quenched);
  c.add("moment inequality violation " + g(tr.max_inequality_violation()) + " <= " + g(tr.tolerance_scale),
        tr.inequality_holds());
  c.add("under 60 s", seconds_since(t0) < 60.0);
  return finish(9, "quenching", c);
}

CriterionResult stability(const AcceptanceOptions&) {
  Checks c;
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  DiscreteField bump = principal_eigenpair(d).phi1;
  const double m = max_value(bump);
  for (double& v : bump.values) v *= 1e-4 / m;
  EvolveOptions o;
  o.dt_init = 1e-3;
  o.t_max = 1.0;
  o.stop_on_steady = false;
  const EvolutionResult a = evolve(d, 1.0, 0.5, d.zeros(), o, "zero");
  const EvolutionResult b = evolve(d, 1.0, 0.5, bump, o, "perturbed");
  double worst = 0.0;
  const bool aligned = a.snapshots.size() == b.snapshots.size();
  for (std::size_t k = 0; aligned && k < a.snapshots.size(); ++k)
    worst = std::max(worst, l1_distance(d, a.snapshots[k].u, b.snapshots[k].u));
  c.add("max L1 gap on [0, 1] " + g(worst) + " <= 1e-3", aligned && worst <= 1e-3);
  return finish(10, "stability under perturbation", c);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Relative path -> contents for every regular file below `root`.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

CriterionResult determinism(const AcceptanceOptions& opts) {
  Checks c;
  const fs::path a = opts.work_dir / "determinism_a";
  const fs::path b = opts.work_dir / "determinism_b";
  fs::remove_all(a);
  fs::remove_all(b);
  fs::create_directories(opts.work_dir);
  if (!opts.cli_path.empty()) {
    for (const fs::path& dir : {a, b}) {
      const std::string cmd = quote(opts.cli_path) + " verify-all --out " + quote(dir.string()) + " > " +
                              quote((dir.string() + ".log")) + " 2>&1";
      const int rc = std::system(cmd.c_str());
      c.add("verify-all exit status " + std::to_string(rc), rc == 0);
    }
  } else {
    ExperimentConfig cfg = load_config("evolve", "", {});
    for (const fs::path& dir : {a, b}) {
      const int rc = run_to_directory(cfg, dir);
      c.add("evolve exit status " + std::to_string(rc), rc == 0);
    }
  }
  const auto ta = tree(a);
  const auto tb = tree(b);
  c.add(std::to_string(ta.size()) + " data files byte-identical", !ta.empty() && ta == tb);
  return finish(11, "determinism and CLI contract", c);
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list = {
      {1, "principal eigenpair", eigenpairs},
      {2, "pull-in voltage", pull_in},
      {3, "nonlocal root", nonlocal_root},
      {4, "threshold ordering", ordering},
      {5, "energy identity", energy},
      {6, "Duhamel cross-validation", duhamel},
      {7, "global existence and steady limit", global_existence},
      {8, "sandwich invariance", sandwich},
      {9, "quenching", quenching},
      {10, "stability under perturbation", stability},
      {11, "determinism and CLI contract", determinism},
  };
  return list;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& crit : acceptance_criteria()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), crit.id) == opts.only.end()) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = crit.run(opts);
    } catch (const std::exception& e) {
      r = {crit.id, crit.name, false, std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = seconds_since(t0);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mems::runner
