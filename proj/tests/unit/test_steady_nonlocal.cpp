#include <gtest/gtest.h>

#include <cmath>

#include "mems/error.hpp"
#include "mems/steady_nonlocal.hpp"

using namespace mems;

namespace {

const Domain& interval128() {
  static const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  return d;
}

const NonlocalSolver& interval_solver() {
  static const NonlocalSolver s(interval128(), pull_in_voltage(interval128()));
  return s;
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

TEST(SteadyNonlocal, CapacitanceOfZeroIsVolume) {
  const Domain& d = interval128();
  EXPECT_NEAR(capacitance_integral(d, d.zeros()), 2.0, 1e-12);
  EXPECT_NEAR(nonlocal_factor(d, 0.5, d.zeros()), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(nonlocal_factor(d, 0.0, d.constant(0.4)), 1.0);
}

TEST(SteadyNonlocal, HMapBasics) {
  const NonlocalSolver& s = interval_solver();
  EXPECT_EQ(s.h(1.0, 0.0), 0.0);
  for (double mu : {0.05, 0.1, 0.2, 0.3}) EXPECT_NEAR(s.h(0.0, mu), mu, 1e-14);
  double prev = 0.0;
  for (double mu = 0.02; mu < s.branch().fold_lower; mu += 0.02) {
    const double v = s.h(1.0, mu);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_NEAR(h_map(interval128(), 0.5, 0.1), s.h(0.5, 0.1), 1e-8);
  expect_error(ErrorKind::InvalidParams, [&] { s.h(-1.0, 0.1); });
}

TEST(SteadyNonlocal, ChiZeroReducesToLocal) {
  const NonlocalSolver& s = interval_solver();
  const NonlocalSolution sol = s.solve(0.0, 0.2);
  EXPECT_NEAR(sol.mu_root, 0.2, 1e-10);
  const auto w = minimal_solution(interval128(), 0.2);
  for (std::size_t j = 0; j < w.size(); ++j) EXPECT_NEAR(sol.v[j], w[j], 1e-10);
}

TEST(SteadyNonlocal, RootSatisfiesScalarEquation) {
  const NonlocalSolver& s = interval_solver();
  const double chi = 1.0, lambda = 2.0;
  const NonlocalSolution sol = s.solve(chi, lambda);
  const double f = 1.0 + chi * sol.capacitance_integral;
  EXPECT_NEAR(sol.mu_root * f * f, lambda, 1e-8 * lambda);
  EXPECT_LE(nonlocal_residual(interval128(), chi, lambda, sol.v), 1e-6);
  EXPECT_EQ(sol.lambda, lambda);
  EXPECT_EQ(sol.chi, chi);
}

TEST(SteadyNonlocal, RootOutOfRangeAboveHMax) {
  const NonlocalSolver& s = interval_solver();
  expect_error(ErrorKind::RootOutOfRange, [&] { s.solve(1.0, 1.01 * s.h_max(1.0)); });
  EXPECT_NO_THROW(s.solve(1.0, 0.99 * s.h_max(1.0)));
}

TEST(SteadyNonlocal, ThresholdsInterval) {
  const NonlocalSolver& s = interval_solver();
  const ThresholdReport t = s.thresholds(1.0);
  ASSERT_TRUE(t.threshold_1d.has_value());
  EXPECT_NEAR(*t.threshold_1d, 0.75, 1e-12);
  EXPECT_FALSE(t.lambda_N_upper.has_value());
  EXPECT_NEAR(t.lambda_star_N, s.h_max(1.0), 1e-12);
  EXPECT_GT(t.lambda_star_N, t.lambda_star_local);
  EXPECT_NEAR(global_existence_threshold_1d(interval128(), 1.0), 0.75, 1e-12);
}

TEST(SteadyNonlocal, WeakCouplingApproachesLocalThreshold) {
  const ThresholdReport t = interval_solver().thresholds(1e-4);
  EXPECT_NEAR(t.lambda_star_N / t.lambda_star_local, 1.0, 1e-2);
}

TEST(SteadyNonlocal, ObservedOnsetBracketsHMax) {
  const NonlocalSolver& s = interval_solver();
  const double onset = s.observed_nonexistence_onset(0.5);
  EXPECT_GT(onset, s.h_max(0.5));
  EXPECT_LE(onset, 1.005 * s.h_max(0.5) * (1.0 + 1e-12));
}

TEST(SteadyNonlocal, BallUpperBound) {
  const Domain disk = build_domain(DomainSpec::ball(1.0, 2, 64));
  // (n+2)^2 |dOmega| / (8 a n) (chi (2 + chi |Omega|) + 1/|Omega|) with n = 2.
  const double pi = std::acos(-1.0);
  const double chi = 0.1;
  const double expected = 16.0 * 2.0 * pi / 16.0 * (chi * (2.0 + chi * pi) + 1.0 / pi);
  EXPECT_NEAR(nonexistence_upper_bound(disk, chi), expected, 1e-10);
  expect_error(ErrorKind::UnsupportedDomain, [&] { nonexistence_upper_bound(interval128(), chi); });
  expect_error(ErrorKind::UnsupportedDomain, [&] { global_existence_threshold_1d(disk, chi); });
}

TEST(SteadyNonlocal, ThresholdChainDisk) {
  const Domain disk = build_domain(DomainSpec::ball(1.0, 2, 128));
  const ThresholdReport t = thresholds(disk, 0.1);
  ASSERT_TRUE(t.lambda_N_upper.has_value());
  EXPECT_LT(t.lambda_star_local, t.lambda_star_N);
  EXPECT_LE(t.lambda_star_N, *t.lambda_N_upper);
}

TEST(SteadyNonlocal, RefinementDefectIsSecondOrder) {
  const DomainSpec s1 = DomainSpec::interval(1.0, 63);
  const DomainSpec s2 = DomainSpec::interval(1.0, 127);
  const double d1 = refinement_defect(s1, 1.0, 1.0);
  const double d2 = refinement_defect(s2, 1.0, 1.0);
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d1 / d2, 4.0, 0.5);
}

TEST(SteadyNonlocal, RefinementRejectsMismatchedGrids) {
  const Domain a = build_domain(DomainSpec::interval(1.0, 32));
  const Domain b = build_domain(DomainSpec::interval(1.0, 64));
  const NonlocalSolver sa(a, pull_in_voltage(a));
  const NonlocalSolver sb(b, pull_in_voltage(b));
  expect_error(ErrorKind::DomainMismatch, [&] { refinement_defect(sa, sb, 1.0, 0.5); });
}

TEST(SteadyNonlocal, ConvenienceSolveMatchesSolver) {
  const NonlocalSolution a = solve_nonlocal_steady(interval128(), 0.5, 0.8);
  const NonlocalSolution b = interval_solver().solve(0.5, 0.8);
  EXPECT_NEAR(a.mu_root, b.mu_root, 1e-9);
}
