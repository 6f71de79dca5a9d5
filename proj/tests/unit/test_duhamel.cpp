#include <gtest/gtest.h>

#include <cmath>

#include "mems/duhamel.hpp"
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

TEST(Duhamel, PropagateZeroTimeIsIdentity) {
  const Domain& d = interval64();
  const auto u0 = scaled_eigenfunction(d, 0.4);
  const auto q = heat_propagate(d, u0, 0.0);
  EXPECT_EQ(q.values, u0.values);
}

TEST(Duhamel, PropagateEigenfunction) {
  const Domain& d = build_domain(DomainSpec::interval(1.0, 128));
  const EigenPair e = principal_eigenpair(d);
  const auto q = heat_propagate(d, e.phi1, 1.0);
  const double factor = std::exp(-e.mu1);
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j)
    EXPECT_NEAR(q[j] / (factor * e.phi1[j]), 1.0, 1e-2);
}

TEST(Duhamel, PropagateDecaysLongTime) {
  const Domain& d = interval64();
  const double mu1 = principal_eigenpair(d).mu1;
  const auto u0 = d.sample([](double x) { return 0.5 * (1.0 - std::abs(x)); });
  const auto q = heat_propagate(d, u0, 10.0 / mu1);
  EXPECT_LE(max_abs(q), 2.0 * std::exp(-10.0) * max_abs(u0));
}

TEST(Duhamel, PropagateSmoothDataStaysPositive) {
  // Sub-steps of size h damp but do not remove sign changes for rough data;
  // smooth nonnegative data stays nonnegative.
  const Domain& d = interval64();
  const auto u0 = d.sample([](double x) { return 0.5 * (1.0 - x * x) * (1.0 - x * x); });
  const auto q = heat_propagate(d, u0, 0.05);
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) EXPECT_GE(q[j], 0.0);
  EXPECT_LT(max_value(q), max_value(u0));
  expect_error(ErrorKind::InvalidParams, [&] { heat_propagate(d, u0, -1.0); });
}

TEST(Duhamel, ExistenceHorizon) {
  EXPECT_DOUBLE_EQ(picard_existence_horizon(0.0, 1.0), 0.0625);
  EXPECT_DOUBLE_EQ(picard_existence_horizon(0.5, 2.0), 0.00390625);
  expect_error(ErrorKind::InvalidParams, [] { picard_existence_horizon(1.0, 1.0); });
  expect_error(ErrorKind::InvalidParams, [] { picard_existence_horizon(-0.1, 1.0); });
  expect_error(ErrorKind::InvalidParams, [] { picard_existence_horizon(0.5, 0.0); });
}

TEST(Duhamel, IteratesRespectCeilingAndFloor) {
  const Domain& d = interval64();
  const auto u0 = scaled_eigenfunction(d, 0.5);
  PicardOptions opts;
  opts.stop_on_converge = false;
  const PicardRun run = picard_iterate(d, 1.0, 2.0, u0, 8, opts);
  ASSERT_EQ(run.iterates.size(), 8u);
  EXPECT_DOUBLE_EQ(run.a_bound, 0.75);
  EXPECT_NEAR(run.horizon_T, std::pow(0.5, 3) / 32.0, 1e-15);
  const double tol = run.discrete_tolerance();
  for (const auto& it : run.iterates) {
    ASSERT_EQ(it.slices.size(), 201u);
    for (std::size_t m = 0; m < it.slices.size(); ++m)
      for (std::size_t j = 0; j < d.size(); ++j) {
        // Nonnegative forcing: every iterate dominates the propagated data.
        EXPECT_GE(it.slices[m][j], run.propagated_data.slices[m][j] - tol);
        EXPECT_LE(it.slices[m][j], run.a_bound + tol);
      }
  }
}

TEST(Duhamel, IteratesContract) {
  const Domain& d = interval64();
  const auto u0 = scaled_eigenfunction(d, 0.5);
  const PicardRun run = picard_iterate(d, 1.0, 2.0, u0, 40);
  ASSERT_TRUE(run.converged_at.has_value());
  EXPECT_EQ(static_cast<int>(run.iterates.size()), *run.converged_at);

  PicardOptions all;
  all.stop_on_converge = false;
  const PicardRun full = picard_iterate(d, 1.0, 2.0, u0, 6, all);
  for (std::size_t k = 2; k < full.iterates.size(); ++k) {
    const double now = max_difference(full.iterates[k], full.iterates[k - 1]);
    const double before = max_difference(full.iterates[k - 1], full.iterates[k - 2]);
    if (before < 1e-13) break;
    EXPECT_LE(now, 0.5 * before) << "k = " << k;
  }
}

TEST(Duhamel, MatchesTimeStepper) {
  const Domain& d = interval64();
  const auto u0 = scaled_eigenfunction(d, 0.5);
  const PicardRun run = picard_iterate(d, 1.0, 2.0, u0, 40);
  ASSERT_TRUE(run.converged_at.has_value());
  EvolveOptions opts;
  opts.dt_init = run.dt / 4.0;
  opts.t_max = run.horizon_T;
  const EvolutionResult res = evolve(d, 1.0, 2.0, u0, opts);
  const auto& last = run.iterates.back().slices.back();
  double diff = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) diff = std::max(diff, std::abs(last[j] - res.snapshots.back().u[j]));
  EXPECT_LE(diff, run.discrete_tolerance());
}

TEST(Duhamel, TinyVoltageHasLongHorizon) {
  // The horizon blows up like 1/lambda; a coarse grid keeps the sub-step count low.
  const Domain d = build_domain(DomainSpec::interval(1.0, 16));
  const auto u0 = scaled_eigenfunction(d, 0.9);
  const PicardRun run = picard_iterate(d, 1.0, 1e-8, u0, 5);
  EXPECT_NEAR(run.horizon_T, 1e-3 / 16e-8, 1e-6);
  ASSERT_TRUE(run.converged_at.has_value());
  EXPECT_LE(*run.converged_at, 2);
  EXPECT_LE(max_difference(run.iterates.back(), run.propagated_data), 1e-6);
  const auto& last = run.iterates.back();
  for (std::size_t m = 0; m < last.slices.size(); ++m)
    for (std::size_t j = 0; j < d.size(); ++j) EXPECT_LE(last.slices[m][j], run.a_bound + run.discrete_tolerance());
}

TEST(Duhamel, RejectsBadArguments) {
  const Domain& d = interval64();
  expect_error(ErrorKind::InvalidParams, [&] { picard_iterate(d, 1.0, 1.0, d.zeros(), 0); });
  expect_error(ErrorKind::InvalidParams, [&] { picard_iterate(d, -1.0, 1.0, d.zeros(), 3); });
  expect_error(ErrorKind::InvalidParams, [&] { picard_iterate(d, 1.0, 1.0, d.constant(1.0), 3); });
}

TEST(Duhamel, MaxDifference) {
  const Domain& d = interval64();
  SpaceTimeField a, b;
  a.times = b.times = {0.0, 1.0};
  a.slices = {d.zeros(), d.zeros()};
  b.slices = {d.zeros(), d.constant(0.25)};
  EXPECT_DOUBLE_EQ(max_difference(a, b), 0.25);
}

TEST(Duhamel, NonlocalIteratesBelowLocal) {
  const Domain& d = interval64();
  const auto u0 = scaled_eigenfunction(d, 0.5);
  PicardOptions opts;
  opts.stop_on_converge = false;
  const PicardRun nonlocal = picard_iterate(d, 1.0, 2.0, u0, 5, opts);
  const PicardRun local = picard_iterate(d, 0.0, 2.0, u0, 5, opts);
  for (std::size_t k = 0; k < nonlocal.iterates.size(); ++k)
    for (std::size_t m = 0; m < nonlocal.iterates[k].slices.size(); ++m)
      for (std::size_t j = 0; j < d.size(); ++j)
        EXPECT_LE(nonlocal.iterates[k].slices[m][j], local.iterates[k].slices[m][j] + 1e-14);
}
