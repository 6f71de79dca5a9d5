#include "mems/duhamel.hpp"

#include <algorithm>
#include <cmath>

#include "mems/error.hpp"
#include "mems/parabolic.hpp"

namespace mems {

namespace {

class CrankNicolson {
 public:
  CrankNicolson(const Domain& d, double dt)
      : d_(d),
        vol_(d.weights().subspan(d.first_unknown(), d.unknown_count())),
        half_dt_(0.5 * dt),
        implicit_(make_implicit(d, vol_, 0.5 * dt)) {}

  void step(std::vector<double>& x) const {
    auto sx = d_.stiffness().multiply(x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = vol_[i] * x[i] - half_dt_ * sx[i];
    implicit_.solve_in_place(x);
  }

 private:
  static SpdFactorization make_implicit(const Domain& d, std::span<const double> vol, double half_dt) {
    SymTridiagonal a = d.stiffness().scaled(half_dt);
    for (std::size_t i = 0; i < a.diag.size(); ++i) a.diag[i] += vol[i];
    return SpdFactorization(a);
  }

  const Domain& d_;
  std::span<const double> vol_;
  double half_dt_;
  SpdFactorization implicit_;
};

// P(t) realised as n equal Crank-Nicolson sub-steps with t / n <= h.
class Propagator {
 public:
  Propagator(const Domain& d, double t)
      : substeps_(t > 0.0 ? static_cast<int>(std::ceil(t / d.spacing() - 1e-12)) : 0),
        cn_(d, substeps_ > 0 ? t / substeps_ : 0.0) {}

  void apply(std::vector<double>& x) const {
    for (int s = 0; s < substeps_; ++s) cn_.step(x);
  }

 private:
  int substeps_;
  CrankNicolson cn_;
};

}  // namespace

DiscreteField heat_propagate(const Domain& d, const DiscreteField& u0, double t) {
  d.check(u0);
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParams, "propagation time must be >= 0");
  if (t == 0.0) return u0;
  auto x = restrict_unknowns(d, u0);
  Propagator(d, t).apply(x);
  return extend_unknowns(d, x);
}

double picard_existence_horizon(double a, double lambda) {
  if (!(a >= 0.0) || !(a < 1.0)) throw Error(ErrorKind::InvalidParams, "need 0 <= a < 1");
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidParams, "need lambda > 0");
  const double gap = 1.0 - a;
  return gap * gap * gap / (16.0 * lambda);
}

double max_difference(const SpaceTimeField& a, const SpaceTimeField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(a.slices.size(), b.slices.size()); ++k)
    for (std::size_t j = 0; j < a.slices[k].size(); ++j)
      m = std::max(m, std::abs(a.slices[k].values[j] - b.slices[k].values[j]));
  return m;
}

PicardRun picard_iterate(const Domain& d, double chi, double lambda, const DiscreteField& u0, int k_max,
                         const PicardOptions& opts) {
  d.check(u0);
  if (k_max < 1 || opts.time_steps < 1) throw Error(ErrorKind::InvalidParams, "need k_max >= 1 and time steps >= 1");
  if (!(chi >= 0.0)) throw Error(ErrorKind::InvalidParams, "chi must be >= 0");
  for (double v : u0.values)
    if (!(v >= 0.0) || !(v < 1.0)) throw Error(ErrorKind::InvalidParams, "need 0 <= u0 < 1");

  PicardRun run;
  const double a = max_value(u0);
  run.horizon_T = picard_existence_horizon(a, lambda);
  run.a_bound = 0.5 * (1.0 + a);
  const int n_t = opts.time_steps;
  run.dt = run.horizon_T / n_t;
  run.grid_spacing = d.spacing();
  const double ceiling = run.a_bound + run.discrete_tolerance();

  const Propagator step(d, run.dt);
  const std::size_t lo = d.first_unknown();

  std::vector<double> times(n_t + 1);
  for (int m = 0; m <= n_t; ++m) times[m] = m * run.dt;

  run.propagated_data.times = times;
  {
    auto x = restrict_unknowns(d, u0);
    run.propagated_data.slices.push_back(extend_unknowns(d, x));
    for (int m = 0; m < n_t; ++m) {
      step.apply(x);
      run.propagated_data.slices.push_back(extend_unknowns(d, x));
    }
  }

  SpaceTimeField previous;
  previous.times = times;
  previous.slices.assign(n_t + 1, u0);

  for (int k = 1; k <= k_max; ++k) {
    SpaceTimeField next;
    next.times = times;
    next.slices.reserve(n_t + 1);
    auto x = restrict_unknowns(d, u0);
    next.slices.push_back(extend_unknowns(d, x));
    for (int m = 0; m < n_t; ++m) {
      const auto f = nonlocal_forcing(d, chi, lambda, previous.slices[m]);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += run.dt * f[lo + i];
      step.apply(x);
      for (double v : x)
        if (!(v <= ceiling))
          throw Error(ErrorKind::CeilingViolation, "Picard iterate exceeded (1 + a) / 2 on [0, T]");
      next.slices.push_back(extend_unknowns(d, x));
    }
    const double change = max_difference(next, previous);
    run.iterates.push_back(next);
    previous = std::move(next);
    if (change <= opts.tol && !run.converged_at) {
      run.converged_at = k;
      if (opts.stop_on_converge) break;
    }
  }
  return run;
}

}  // namespace mems
