#include "mems/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "mems/error.hpp"

namespace mems {

std::string_view to_string(EvolutionStatus s) noexcept {
  switch (s) {
    case EvolutionStatus::ConvergedToSteady: return "converged";
    case EvolutionStatus::Quenched: return "quenched";
    case EvolutionStatus::HorizonReached: return "horizon";
  }
  return "unknown";
}

std::vector<double> nonlocal_forcing(const Domain& d, double chi, double lambda, const DiscreteField& u) {
  const double factor = nonlocal_factor(d, chi, u);
  std::vector<double> f(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double gap = 1.0 - u.values[j];
    f[j] = lambda / (gap * gap * factor);
  }
  return f;
}

namespace {

void validate_initial_data(const DiscreteField& u0) {
  for (double v : u0.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInitialData, "initial data must be finite");
    if (v < 0.0) throw Error(ErrorKind::InvalidInitialData, "initial data must be nonnegative");
    if (!(v < 1.0)) throw Error(ErrorKind::InvalidInitialData, "initial data must satisfy u0 <= a < 1");
  }
}

// (V + dt S) factorizations keyed by dt; the step controller only visits a
// handful of distinct values.
class ImplicitDiffusion {
 public:
  explicit ImplicitDiffusion(const Domain& d)
      : d_(d), vol_(d.weights().subspan(d.first_unknown(), d.unknown_count())) {}

  void step(double dt, std::vector<double>& x) {
    auto it = cache_.find(dt);
    if (it == cache_.end()) {
      SymTridiagonal a = d_.stiffness().scaled(dt);
      for (std::size_t i = 0; i < a.diag.size(); ++i) a.diag[i] += vol_[i];
      if (cache_.size() > 64) cache_.clear();
      it = cache_.emplace(dt, SpdFactorization(a)).first;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= vol_[i];
    it->second.solve_in_place(x);
  }

 private:
  const Domain& d_;
  std::span<const double> vol_;
  std::map<double, SpdFactorization> cache_;
};

}  // namespace

double extrapolate_quench_time(std::span<const double> t, std::span<const double> sup_u) {
  const std::size_t n = t.size();
  if (n < 3) return n ? t.back() : 0.0;
  const double t_last = t[n - 1];
  const double span = std::max(t_last - t[0], 1e-300);

  auto sse = [&](double big_t) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(big_t - t[i]);
      const double y = std::log(std::max(1.0 - sup_u[i], 1e-300));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double icpt = (sy - slope * sx) / n;
    double e = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(big_t - t[i]);
      const double y = std::log(std::max(1.0 - sup_u[i], 1e-300));
      e += (y - icpt - slope * x) * (y - icpt - slope * x);
    }
    return std::pair{e, slope};
  };

  // Golden-section search for T in (t_last, t_last + span].
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = t_last + 1e-9 * span, b = t_last + span;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = sse(c).first, fe = sse(e).first;
  for (int it = 0; it < 100; ++it) {
    if (fc < fe) {
      b = e; e = c; fe = fc;
      c = b - g * (b - a); fc = sse(c).first;
    } else {
      a = c; c = e; fc = fe;
      e = a + g * (b - a); fe = sse(e).first;
    }
  }
  const double best = 0.5 * (a + b);
  const auto [err, slope] = sse(best);
  if (!std::isfinite(err) || !(slope > 0.0)) return t_last;
  return best;
}

EvolutionResult evolve(const Domain& d, double chi, double lambda, const DiscreteField& u0_in,
                       const EvolveOptions& opts, std::string u0_descriptor) {
  d.check(u0_in);
  if (!(opts.dt_init > 0.0) || !(opts.t_max > 0.0) || opts.sample_stride < 1 || !(opts.quench_tol > 0.0) ||
      !(opts.quench_tol < 0.5) || !(opts.steady_tol > 0.0))
    throw Error(ErrorKind::InvalidParams, "invalid evolve options");
  if (!(chi >= 0.0) || !(lambda >= 0.0)) throw Error(ErrorKind::InvalidParams, "chi and lambda must be >= 0");
  validate_initial_data(u0_in);

  EvolutionResult res;
  res.params = {lambda, chi, d.id(), std::move(u0_descriptor)};
  res.dt_max = opts.dt_init;
  res.grid_spacing = d.spacing();

  ImplicitDiffusion diffusion(d);
  const std::size_t lo = d.first_unknown();
  DiscreteField u = u0_in;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (d.is_boundary(j)) u.values[j] = 0.0;
  if (opts.smooth_initial_data) {
    auto x = restrict_unknowns(d, u);
    diffusion.step(d.spacing() * d.spacing(), x);
    u = extend_unknowns(d, x);
  }

  auto record = [&](double t) {
    res.times.push_back(t);
    res.sup_u.push_back(max_value(u));
    res.snapshots.push_back({t, u});
  };

  const double quench_level = 1.0 - opts.quench_tol;
  const double predictor_cap = 1.0 - 0.5 * opts.quench_tol;
  double t = 0.0, dt = opts.dt_init;
  int smooth_steps = 0, steady_samples = 0;
  bool steady_seen = false;
  std::deque<std::pair<double, double>> tail;
  record(0.0);
  tail.emplace_back(0.0, res.sup_u.back());

  std::vector<double> x(d.unknown_count());
  while (t < opts.t_max * (1.0 - 1e-14)) {
    const double dt_step = std::min(dt, opts.t_max - t);
    const auto f = nonlocal_forcing(d, chi, lambda, u);
    double pred_max = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u.values[lo + i] + dt_step * f[lo + i];
      pred_max = std::max(pred_max, x[i]);
    }
    if (pred_max > predictor_cap) {
      dt *= 0.5;
      smooth_steps = 0;
      if (dt < 1e-15 * std::max(1.0, t))
        throw Error(ErrorKind::NonFiniteState, "time step underflow before quench detection");
      continue;
    }
    diffusion.step(dt_step, x);
    double ut_max = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i])) throw Error(ErrorKind::NonFiniteState, "non-finite value in the evolution");
      ut_max = std::max(ut_max, std::abs(x[i] - u.values[lo + i]) / dt_step);
      sup = std::max(sup, x[i]);
      u.values[lo + i] = x[i];
    }
    const double t_prev = t;
    t += dt_step;
    ++res.steps;
    if (++smooth_steps >= 20 && dt < opts.dt_init) {
      dt = std::min(2.0 * dt, opts.dt_init);
      smooth_steps = 0;
    }
    tail.emplace_back(t, sup);
    if (tail.size() > 24) tail.pop_front();

    if (sup >= quench_level) {
      record(t);
      res.status = EvolutionStatus::Quenched;
      res.quench_lower = t_prev;
      res.quench_upper = t;
      std::vector<double> tt, ss;
      for (const auto& [ti, si] : tail) {
        if (ti > 0.0 && si > 0.0) {
          tt.push_back(ti);
          ss.push_back(si);
        }
      }
      res.quench_estimate = std::clamp(extrapolate_quench_time(tt, ss), t_prev, t + (t - t_prev) * 1e3);
      return res;
    }

    const bool at_end = t >= opts.t_max * (1.0 - 1e-14);
    if (res.steps % opts.sample_stride == 0 || at_end) {
      record(t);
      steady_samples = ut_max <= opts.steady_tol ? steady_samples + 1 : 0;
      if (steady_samples >= opts.steady_window && !steady_seen) {
        steady_seen = true;
        res.t_conv = t;
        if (opts.stop_on_steady) break;
      }
    }
  }
  res.status = steady_seen ? EvolutionStatus::ConvergedToSteady : EvolutionStatus::HorizonReached;
  return res;
}

ComparisonReport assert_comparison(const EvolutionResult& lo, const EvolutionResult& hi) {
  if (lo.params.domain_id != hi.params.domain_id) throw Error(ErrorKind::IncompatibleRuns, "different domains");
  const std::size_t n = std::min(lo.snapshots.size(), hi.snapshots.size());
  if (n == 0) throw Error(ErrorKind::IncompatibleRuns, "no shared samples");
  ComparisonReport rep;
  rep.tolerance = 10.0 * (std::max(lo.dt_max, hi.dt_max) + lo.grid_spacing * lo.grid_spacing);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = lo.snapshots[k];
    const auto& b = hi.snapshots[k];
    if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, a.t))
      throw Error(ErrorKind::IncompatibleRuns, "sample times differ");
    for (std::size_t j = 0; j < a.u.size(); ++j)
      rep.max_violation = std::max(rep.max_violation, a.u.values[j] - b.u.values[j]);
  }
  rep.samples_compared = n;
  rep.ordered = rep.max_violation <= rep.tolerance;
  return rep;
}

double steady_limit_check(const EvolutionResult& res, const NonlocalSolution& target) {
  if (res.status != EvolutionStatus::ConvergedToSteady)
    throw Error(ErrorKind::NotConverged, "run did not reach a steady state");
  const auto& u = res.snapshots.back().u;
  if (u.domain_id != target.v.domain_id || u.size() != target.v.size())
    throw Error(ErrorKind::DomainMismatch, "target lives on another domain");
  double m = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u.values[j] - target.v.values[j]));
  return m;
}

}  // namespace mems
