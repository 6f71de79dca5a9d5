#include <gtest/gtest.h>

#include <cmath>

#include "mems/error.hpp"
#include "mems/parabolic.hpp"
#include "mems/spectral.hpp"

using namespace mems;

namespace {

const Domain& interval64() {
  static const Domain d = build_domain(DomainSpec::interval(1.0, 64));
  return d;
}

DiscreteField scaled_eigenfunction(const Domain& d, double peak) {
  DiscreteField phi = principal_eigenpair(d).phi1;
  const double m = max_value(phi);
  for (double& v : phi.values) v *= peak / m;
  return phi;
}

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Parabolic, HeatDecayWithoutVoltage) {
  const Domain& d = interval64();
  const double mu1 = principal_eigenpair(d).mu1;
  EvolveOptions opts;
  opts.dt_init = 1e-4;
  opts.t_max = 1.5;
  const EvolutionResult res = evolve(d, 1.0, 0.0, scaled_eigenfunction(d, 0.5), opts);
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    const double t = res.times[k];
    if (t < 0.5 || t > 1.5) continue;
    EXPECT_NEAR(res.sup_u[k] / (0.5 * std::exp(-mu1 * t)), 1.0, 0.02) << "t = " << t;
  }
}

TEST(Parabolic, ZeroVoltageFromZeroStaysZero) {
  const Domain& d = interval64();
  EvolveOptions opts;
  opts.t_max = 0.05;
  const EvolutionResult res = evolve(d, 1.0, 0.0, d.zeros(), opts);
  for (double s : res.sup_u) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(res.params.lambda, 0.0);
  EXPECT_EQ(res.params.domain_id, d.id());
}

TEST(Parabolic, ConvergesToNonlocalSteadyState) {
  const Domain& d = interval64();
  const NonlocalSolution target = solve_nonlocal_steady(d, 1.0, 0.3);
  EvolveOptions opts;
  opts.t_max = 40.0;
  const EvolutionResult res = evolve(d, 1.0, 0.3, d.zeros(), opts, "zero");
  ASSERT_EQ(res.status, EvolutionStatus::ConvergedToSteady);
  EXPECT_GT(res.t_conv, 0.0);
  EXPECT_LE(steady_limit_check(res, target), 1e-4);
  EXPECT_EQ(res.params.u0, "zero");
}

TEST(Parabolic, SteadyStateIsStationary) {
  const Domain& d = interval64();
  const NonlocalSolution target = solve_nonlocal_steady(d, 1.0, 0.3);
  EvolveOptions opts;
  opts.t_max = 1.0;
  opts.stop_on_steady = false;
  const EvolutionResult res = evolve(d, 1.0, 0.3, target.v, opts);
  double dev = 0.0;
  for (const auto& s : res.snapshots)
    for (std::size_t j = 0; j < d.size(); ++j) dev = std::max(dev, std::abs(s.u[j] - target.v[j]));
  EXPECT_LE(dev, 1e-6);
}

TEST(Parabolic, ContinuesPastSteadinessWhenAsked) {
  const Domain& d = interval64();
  EvolveOptions opts;
  opts.t_max = 30.0;
  opts.stop_on_steady = false;
  opts.sample_stride = 100;
  const EvolutionResult res = evolve(d, 1.0, 0.3, d.zeros(), opts);
  EXPECT_NEAR(res.times.back(), 30.0, 1e-9);
  EXPECT_GT(res.t_conv, 0.0);
}

TEST(Parabolic, QuenchesForLargeVoltage) {
  const Domain& d = interval64();
  EvolveOptions opts;
  opts.dt_init = 1e-4;
  opts.t_max = 5.0;
  const EvolutionResult res = evolve(d, 0.1, 10.0, d.zeros(), opts);
  ASSERT_EQ(res.status, EvolutionStatus::Quenched);
  EXPECT_LT(res.quench_lower, res.quench_upper);
  EXPECT_GE(res.quench_estimate, res.quench_lower);
  EXPECT_LE(res.quench_estimate, res.quench_upper + 1e-2);
  EXPECT_GE(res.sup_u.back(), 1.0 - opts.quench_tol);
  for (std::size_t k = 0; k + 1 < res.sup_u.size(); ++k) EXPECT_LT(res.sup_u[k], 1.0 - opts.quench_tol);
}

TEST(Parabolic, ComparisonPrinciple) {
  const Domain& d = interval64();
  EvolveOptions opts;
  opts.t_max = 2.0;
  opts.stop_on_steady = false;
  const EvolutionResult lo = evolve(d, 1.0, 0.5, d.zeros(), opts);
  const EvolutionResult hi = evolve(d, 1.0, 0.5, scaled_eigenfunction(d, 0.1), opts);
  const ComparisonReport rep = assert_comparison(lo, hi);
  EXPECT_TRUE(rep.ordered);
  EXPECT_GT(rep.samples_compared, 100u);
  EXPECT_NEAR(rep.tolerance, lo.discrete_tolerance(), 0.0);
}

TEST(Parabolic, ComparisonRejectsOtherDomains) {
  const Domain other = build_domain(DomainSpec::interval(1.0, 32));
  EvolveOptions opts;
  opts.t_max = 0.01;
  const EvolutionResult a = evolve(interval64(), 1.0, 0.1, interval64().zeros(), opts);
  const EvolutionResult b = evolve(other, 1.0, 0.1, other.zeros(), opts);
  expect_error(ErrorKind::IncompatibleRuns, [&] { assert_comparison(a, b); });
}

TEST(Parabolic, FirstOrderInTime) {
  const Domain& d = interval64();
  auto final_field = [&](double dt) {
    EvolveOptions opts;
    opts.dt_init = dt;
    opts.t_max = 0.5;
    return evolve(d, 1.0, 0.5, d.zeros(), opts).snapshots.back().u;
  };
  const auto ref = final_field(1e-5);
  auto err = [&](const DiscreteField& u) {
    double e = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) e = std::max(e, std::abs(u[j] - ref[j]));
    return e;
  };
  const double e1 = err(final_field(4e-3));
  const double e2 = err(final_field(2e-3));
  EXPECT_NEAR(e1 / e2, 2.0, 0.5);
}

TEST(Parabolic, RejectsInvalidInitialData) {
  const Domain& d = interval64();
  expect_error(ErrorKind::InvalidInitialData, [&] { evolve(d, 1.0, 0.1, d.constant(-0.1)); });
  DiscreteField touching = d.zeros();
  touching.values[10] = 1.0;
  expect_error(ErrorKind::InvalidInitialData, [&] { evolve(d, 1.0, 0.1, touching); });
  expect_error(ErrorKind::InvalidParams, [&] { evolve(d, -1.0, 0.1, d.zeros()); });
  const Domain other = build_domain(DomainSpec::interval(1.0, 32));
  expect_error(ErrorKind::DomainMismatch, [&] { evolve(d, 1.0, 0.1, other.zeros()); });
}

TEST(Parabolic, SteadyLimitNeedsConvergence) {
  const Domain& d = interval64();
  EvolveOptions opts;
  opts.t_max = 0.01;
  const EvolutionResult res = evolve(d, 1.0, 0.3, d.zeros(), opts);
  expect_error(ErrorKind::NotConverged, [&] { steady_limit_check(res, solve_nonlocal_steady(d, 1.0, 0.3)); });
}

TEST(Parabolic, ForcingAtZero) {
  const Domain& d = interval64();
  const auto f = nonlocal_forcing(d, 0.5, 2.0, d.zeros());
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) EXPECT_NEAR(f[j], 2.0 / 4.0, 1e-12);
}

TEST(Parabolic, QuenchTimeExtrapolation) {
  // 1 - sup u = 0.3 sqrt(1 - t).
  std::vector<double> t, s;
  for (int k = 0; k < 200; ++k) {
    const double tk = 0.995 * k / 199.0;
    t.push_back(tk);
    s.push_back(1.0 - 0.3 * std::sqrt(1.0 - tk));
  }
  EXPECT_NEAR(extrapolate_quench_time(t, s), 1.0, 1e-3);
}
