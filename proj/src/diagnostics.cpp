#include "mems/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "mems/error.hpp"

namespace mems {

namespace {

constexpr double kMaxSampleSpacing = 1e-2;

// Derivative at sample k from its neighbours (second order on uneven grids);
// one-sided first order at the ends.
std::vector<double> time_derivative(const EvolutionResult& res, std::size_t k, std::size_t first,
                                    std::size_t last) {
  const auto& s = res.snapshots;
  const std::size_t n = s[k].u.size();
  std::vector<double> ut(n);
  if (k == first || k == last) {
    const std::size_t a = k == first ? k : k - 1;
    const std::size_t b = a + 1;
    const double dt = s[b].t - s[a].t;
    for (std::size_t j = 0; j < n; ++j) ut[j] = (s[b].u.values[j] - s[a].u.values[j]) / dt;
    return ut;
  }
  const double h1 = s[k].t - s[k - 1].t;
  const double h2 = s[k + 1].t - s[k].t;
  const double cm = -h2 / (h1 * (h1 + h2));
  const double c0 = (h2 - h1) / (h1 * h2);
  const double cp = h1 / (h2 * (h1 + h2));
  for (std::size_t j = 0; j < n; ++j)
    ut[j] = cm * s[k - 1].u.values[j] + c0 * s[k].u.values[j] + cp * s[k + 1].u.values[j];
  return ut;
}

double weighted_square(const Domain& d, const std::vector<double>& f) {
  const auto w = d.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += w[j] * f[j] * f[j];
  return acc;
}

}  // namespace

double EnergyLedger::max_relative_drift() const {
  if (samples.empty()) return 0.0;
  const double l0 = samples.front().lyapunov;
  const double scale = l0 != 0.0 ? std::abs(l0) : 1.0;
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.lyapunov - l0) / scale);
  return m;
}

double EnergyLedger::cap(double volume) const {
  const double d0 = samples.empty() ? 0.0 : samples.front().dirichlet;
  return d0 + lambda / (chi * (1.0 + chi * volume));
}

double EnergyLedger::max_cap_excess(double volume) const {
  const double c = cap(volume);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::max(m, s.dissipation_cum + s.dirichlet - c);
  return m;
}

std::vector<EnergySample> energy_terms(const Domain& d, const EvolutionResult& res, std::size_t first) {
  const auto& s = res.snapshots;
  std::vector<EnergySample> out;
  if (first >= s.size()) return out;
  const std::size_t last = s.size() - 1;
  const double chi = res.params.chi;
  const double lambda = res.params.lambda;
  double cum = 0.0, prev_rate = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double rate = last > first ? weighted_square(d, time_derivative(res, k, first, last)) : 0.0;
    if (k > first) cum += 0.5 * (rate + prev_rate) * (s[k].t - s[k - 1].t);
    prev_rate = rate;
    EnergySample e;
    e.t = s[k].t;
    e.dissipation_cum = cum;
    e.dirichlet = dirichlet_energy(d, s[k].u);
    e.nonlocal_pot = chi > 0.0 ? lambda / (chi * (1.0 + chi * capacitance_integral(d, s[k].u))) : 0.0;
    e.lyapunov = e.dissipation_cum + e.dirichlet + e.nonlocal_pot;
    out.push_back(e);
  }
  return out;
}

EnergyLedger energy_ledger(const Domain& d, const EvolutionResult& res, double t0) {
  const double chi = res.params.chi;
  const double lambda = res.params.lambda;
  if (!(chi > 0.0)) throw Error(ErrorKind::InvalidParams, "energy ledger needs chi > 0");
  if (res.params.domain_id != d.id()) throw Error(ErrorKind::DomainMismatch, "run lives on another domain");
  const auto& s = res.snapshots;
  std::size_t first = 0;
  while (first < s.size() && s[first].t < t0 - 1e-12 * std::max(1.0, std::abs(t0))) ++first;
  if (s.size() < first + 3) throw Error(ErrorKind::InsufficientSamples, "need three samples after t0");
  const std::size_t last = s.size() - 1;
  for (std::size_t k = first + 1; k <= last; ++k)
    if (s[k].t - s[k - 1].t > kMaxSampleSpacing * (1.0 + 1e-12))
      throw Error(ErrorKind::InsufficientSamples, "sample spacing exceeds 1e-2");

  EnergyLedger ledger;
  ledger.t0 = s[first].t;
  ledger.lambda = lambda;
  ledger.chi = chi;
  ledger.samples = energy_terms(d, res, first);
  return ledger;
}

GlobalBoundsReport global_bounds_check(const Domain& d, const EvolutionResult& res, double chi, double lambda,
                                double tolerance) {
  if (d.spec().kind != DomainKind::Interval)
    throw Error(ErrorKind::UnsupportedDomain, "the one-dimensional bounds need an interval");
  if (res.params.domain_id != d.id()) throw Error(ErrorKind::DomainMismatch, "run lives on another domain");
  if (!(chi > 0.0) || !(lambda >= 0.0)) throw Error(ErrorKind::InvalidParams, "need chi > 0 and lambda >= 0");
  if (!(lambda < global_existence_threshold_1d(d, chi)))
    throw Error(ErrorKind::HypothesisViolated, "lambda is not below chi (1 + chi |Omega|) / (2 |Omega|)");
  if (res.snapshots.empty()) throw Error(ErrorKind::InsufficientSamples, "empty run");
  if (max_abs(res.snapshots.front().u) != 0.0)
    throw Error(ErrorKind::HypothesisViolated, "the bounds are stated for u0 = 0");

  const double vol = d.volume();
  const double b = d.spec().extent;
  const double denom = chi * (1.0 + chi * vol);
  GlobalBoundsReport rep;
  rep.tolerance = tolerance;
  rep.gradient_bound = 2.0 * lambda / denom;
  rep.sup_bound = std::sqrt(2.0 * lambda * vol / denom);
  rep.steady_envelope = 2.0 * std::sqrt(b * lambda / denom);
  for (const auto& snap : res.snapshots) {
    rep.max_gradient_sq = std::max(rep.max_gradient_sq, 2.0 * dirichlet_energy(d, snap.u));
    rep.max_sup = std::max(rep.max_sup, max_abs(snap.u));
  }
  rep.final_sup = max_abs(res.snapshots.back().u);
  rep.gradient_ok = rep.max_gradient_sq <= rep.gradient_bound + tolerance;
  rep.sup_ok = rep.max_sup <= rep.sup_bound + tolerance;
  rep.envelope_ok = rep.final_sup <= rep.steady_envelope + tolerance;
  return rep;
}

double MomentTrace::max_identity_defect() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.dE_dt_numeric - s.rhs_exact) / (1.0 + std::abs(s.rhs_exact)));
  return m;
}

double MomentTrace::max_inequality_violation() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::max(m, (s.rhs_exact - s.dE_dt_numeric) / (1.0 + std::abs(s.rhs_exact)));
  return m;
}

double MomentTrace::min_growth() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.dE_dt_numeric);
  return m;
}

MomentTrace moment_trace(const Domain& d, const EvolutionResult& res, const EigenPair& eig, double chi,
                         double lambda) {
  d.check(eig.phi1);
  if (res.params.domain_id != d.id()) throw Error(ErrorKind::DomainMismatch, "run lives on another domain");
  std::size_t n = res.snapshots.size();
  if (res.status == EvolutionStatus::Quenched && n > 0) --n;
  if (n < 2) throw Error(ErrorKind::InsufficientSamples, "need two samples before quenching");

  const auto w = d.weights();
  const auto& phi = eig.phi1.values;
  auto moment = [&](const DiscreteField& u) {
    double e = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) e += w[j] * u.values[j] * phi[j];
    return e;
  };

  MomentTrace trace;
  trace.tolerance_scale = res.discrete_tolerance();
  // Forward slopes: with the reaction taken explicitly, the slope over
  // [t_k, t_{k+1}] is driven by the state at t_k.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& u = res.snapshots[k].u;
    const auto& next = res.snapshots[k + 1].u;
    MomentSample m;
    m.t = res.snapshots[k].t;
    m.E = moment(u);
    m.dE_dt_numeric = (moment(next) - m.E) / (res.snapshots[k + 1].t - m.t);
    double pull = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double gap = 1.0 - u.values[j];
      pull += w[j] * phi[j] / (gap * gap);
    }
    m.rhs_exact = -eig.mu1 * m.E + lambda * pull / nonlocal_factor(d, chi, u);
    trace.samples.push_back(m);
  }
  return trace;
}

unsigned worker_count() {
  if (const char* env = std::getenv("MEMS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool QuenchSweep::all_quenched() const {
  return !runs.empty() && std::all_of(runs.begin(), runs.end(), [](const QuenchRun& r) { return r.quenched; });
}

bool QuenchSweep::strictly_decreasing() const {
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (!runs[i].quenched || !runs[i - 1].quenched) continue;
    if (!(runs[i].t_quench < runs[i - 1].t_quench)) return false;
  }
  return true;
}

double QuenchSweep::lambda_T_spread() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : runs) {
    if (!r.quenched) continue;
    lo = std::min(lo, r.lambda * r.t_quench);
    hi = std::max(hi, r.lambda * r.t_quench);
  }
  return hi > 0.0 ? hi / lo : 0.0;
}

QuenchSweep quench_sweep(const Domain& d, double chi, const std::vector<double>& lambdas, const DiscreteField& u0,
                         const EvolveOptions& opts) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw Error(ErrorKind::InvalidParams, "lambdas must be increasing");
  QuenchSweep sweep;
  sweep.chi = chi;
  sweep.runs.resize(lambdas.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++) {
      try {
        QuenchRun r;
        r.lambda = lambdas[i];
        r.run = evolve(d, chi, lambdas[i], u0, opts, "sweep");
        r.quenched = r.run.status == EvolutionStatus::Quenched;
        r.final_sup = r.run.sup_u.back();
        if (r.quenched) {
          r.t_quench = r.run.quench_estimate;
          r.t_lower = r.run.quench_lower;
          r.t_upper = r.run.quench_upper;
        }
        sweep.runs[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(worker_count(), std::max<std::size_t>(lambdas.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Least squares for 1/T = a lambda + c.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : sweep.runs) {
    if (!r.quenched || !(r.t_quench > 0.0)) continue;
    const double y = 1.0 / r.t_quench;
    sx += r.lambda; sy += y; sxx += r.lambda * r.lambda; sxy += r.lambda * y;
    ++n;
  }
  if (n >= 2) {
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double c = (sy - a * sx) / n;
    if (a > 0.0) {
      sweep.fit_C = 1.0 / a;
      sweep.fit_lambda0 = -c / a;
      for (const auto& r : sweep.runs)
        if (r.quenched) sweep.C3 = std::max(sweep.C3, (r.lambda - sweep.fit_lambda0) * r.t_quench);
    }
  }
  return sweep;
}

GrowthFit fit_moment_growth(const std::vector<double>& lambdas, const std::vector<double>& min_growth) {
  if (lambdas.size() != min_growth.size() || lambdas.size() < 2)
    throw Error(ErrorKind::InsufficientSamples, "need at least two (lambda, growth) pairs");
  const double n = static_cast<double>(lambdas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    sx += lambdas[i]; sy += min_growth[i];
    sxx += lambdas[i] * lambdas[i]; sxy += lambdas[i] * min_growth[i];
  }
  GrowthFit fit;
  const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!(a > 0.0)) return fit;
  // Shift the least-squares line down until it supports every point.
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambdas.size(); ++i) c = std::min(c, min_growth[i] - a * lambdas[i]);
  fit.C = 1.0 / a;
  fit.lambda0 = std::max(-c / a, 0.0);
  fit.positive = true;
  return fit;
}

double l1_distance(const Domain& d, const DiscreteField& u, const DiscreteField& v) {
  d.check(u);
  d.check(v);
  const auto w = d.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += w[j] * std::abs(u.values[j] - v.values[j]);
  return acc;
}

}  // namespace mems

namespace mems {

namespace {

DiscreteField scaled(DiscreteField f, double s) {
  for (double& v : f.values) v *= s;
  return f;
}

}  // namespace

std::vector<SandwichCase> sandwich_cases(const NonlocalSolver& solver, double chi) {
  if (!(chi > 0.0)) throw Error(ErrorKind::InvalidParams, "sandwich cases need chi > 0");
  const Domain& d = solver.domain();
  const SteadyBranch& br = solver.branch();
  const double lstar = br.fold_lower;
  const DiscreteField& wstar = w_star(br);
  const double vol = d.volume();
  const double a1 = (1.0 + chi * vol) * (1.0 + chi * vol);
  const double cap_star = capacitance_integral(d, wstar);
  const double f_star = (1.0 + chi * cap_star) * (1.0 + chi * cap_star);
  const double sup_star = max_value(wstar);
  auto w = [&](double mu) { return mu > 0.0 ? minimal_solution(d, mu) : d.zeros(); };
  std::vector<SandwichCase> out;

  {  // below a steady supersolution w_{mu0}
    SandwichCase c;
    c.name = "steady-supersolution";
    c.lambda = 0.9 * lstar * a1;
    const double mu0 = 0.5 * (c.lambda / a1 + lstar);
    c.upper = w(mu0);
    c.u0 = c.upper;
    c.lower = d.zeros();
    out.push_back(std::move(c));
  }
  {  // eps1 w* <= u <= w*
    const double eps0 = a1 * (1.0 - sup_star) * (1.0 - sup_star) / f_star;
    const double eps1 = std::min(eps0, 0.25);
    const double cap_eps = capacitance_integral(d, scaled(wstar, eps1));
    const double lo = a1 * lstar;
    const double hi = lstar * (1.0 + chi * cap_eps) * (1.0 + chi * cap_eps);
    SandwichCase c;
    c.name = "fold-profile";
    c.lambda = 0.5 * (lo + hi);
    c.u0 = scaled(wstar, 0.5 + eps1);
    c.lower = scaled(wstar, eps1);
    c.upper = wstar;
    out.push_back(std::move(c));
  }
  {  // (1 - 2 delta) w_{lambda2} <= u <= w*
    const double delta = 0.25;
    double l2 = lstar, lo = 0.0, hi = -1.0;
    DiscreteField w2;
    for (int it = 0; it < 200 && !(lo < hi); ++it) {
      l2 *= 0.9;
      w2 = w(l2);
      const double cap2 = capacitance_integral(d, scaled(w2, 1.0 - 2.0 * delta));
      lo = l2 * (1.0 - 2.0 * delta) / ((1.0 - sup_star) * (1.0 - sup_star)) * f_star;
      hi = lstar * (1.0 + chi * cap2) * (1.0 + chi * cap2);
    }
    if (!(lo < hi)) throw Error(ErrorKind::EmptyBranch, "no admissible lambda2 window");
    SandwichCase c;
    c.name = "lower-branch";
    c.lambda = 0.5 * (lo + hi);
    c.u0 = scaled(w2, 1.0 - delta);
    c.lower = scaled(w2, 1.0 - 2.0 * delta);
    c.upper = wstar;
    out.push_back(std::move(c));
  }
  {  // w_{(1 - 2 delta) mu'} <= u <= w_mu
    const double delta = 0.25;
    SandwichCase c;
    c.name = "steady-window";
    c.lambda = 0.8 * lstar * a1;
    const double mu = c.lambda / a1;
    const double mu_p = c.lambda / f_star;
    c.u0 = w((1.0 - delta) * mu_p);
    c.lower = w((1.0 - 2.0 * delta) * mu_p);
    c.upper = w(mu);
    out.push_back(std::move(c));
  }
  return out;
}

SandwichReport check_sandwich(const Domain& d, double chi, const SandwichCase& c, const EvolveOptions& opts) {
  const EvolutionResult res = evolve(d, chi, c.lambda, c.u0, opts, c.name);
  SandwichReport rep;
  rep.name = c.name;
  rep.lambda = c.lambda;
  rep.tolerance = res.discrete_tolerance();
  rep.status = res.status;
  for (const auto& snap : res.snapshots) {
    for (std::size_t j = 0; j < snap.u.size(); ++j) {
      rep.max_below = std::max(rep.max_below, c.lower.values[j] - snap.u.values[j]);
      rep.max_above = std::max(rep.max_above, snap.u.values[j] - c.upper.values[j]);
    }
  }
  return rep;
}

}  // namespace mems
