#include <gtest/gtest.h>

#include <cmath>

#include "mems/error.hpp"
#include "mems/spectral.hpp"
#include "mems/steady_local.hpp"

using namespace mems;

namespace {

const Domain& interval128() {
  static const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  return d;
}

const SteadyBranch& interval_branch() {
  static const SteadyBranch br = pull_in_voltage(interval128());
  return br;
}

}  // namespace

TEST(SteadyLocal, ZeroVoltageGivesZero) {
  const auto w = minimal_solution(interval128(), 0.0);
  EXPECT_EQ(max_abs(w), 0.0);
}

TEST(SteadyLocal, SmallVoltageIsNearlyLinear) {
  // w ~ lambda (1 - x^2) / 2 for small lambda.
  const auto w = minimal_solution(interval128(), 0.01);
  EXPECT_NEAR(max_value(w), 0.00501, 5e-4);
  EXPECT_LE(steady_residual(interval128(), 0.01, w), 1e-8);
}

TEST(SteadyLocal, SolutionIsPositiveSymmetricAndBelowOne) {
  const Domain& d = interval128();
  const auto w = minimal_solution(d, 0.3);
  const std::size_t n = d.size();
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) {
    EXPECT_GT(w[j], 0.0);
    EXPECT_LT(w[j], 1.0);
    EXPECT_NEAR(w[j], w[n - 1 - j], 1e-10);
  }
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[n - 1], 0.0);
}

TEST(SteadyLocal, MonotoneInLambda) {
  const Domain& d = interval128();
  const auto a = minimal_solution(d, 0.1);
  const auto b = minimal_solution(d, 0.2);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_LE(a[j], b[j] + 1e-12);
}

TEST(SteadyLocal, NewtonAndPlainIterationAgree) {
  const Domain& d = interval128();
  SteadyOptions plain;
  plain.newton_acceleration = false;
  plain.residual_tol = 1e-11;
  SteadyOptions fast;
  fast.residual_tol = 1e-11;
  const auto a = minimal_solution(d, 0.3, plain);
  const auto b = minimal_solution(d, 0.3, fast);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-9);
}

TEST(SteadyLocal, WarmStartMatchesColdStart) {
  const Domain& d = interval128();
  SteadySolveStats stats;
  const auto cold = minimal_solution(d, 0.32);
  const auto warm = minimal_solution_from(d, 0.32, minimal_solution(d, 0.2), {}, &stats);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(cold[j], warm[j], 1e-8);
  EXPECT_LE(stats.residual, 1e-8 * 1.0);
}

TEST(SteadyLocal, MonotoneIterationIncreasesFromZero) {
  const Domain& d = interval128();
  DiscreteField prev = d.zeros();
  bool increasing = true;
  const MonotoneRun run = monotone_iteration(d, 0.2, d.zeros(), {}, [&](const DiscreteField& w) {
    for (std::size_t j = 0; j < d.size(); ++j)
      if (w[j] < prev[j] - 1e-14) increasing = false;
    prev = w;
  });
  EXPECT_TRUE(run.converged);
  EXPECT_TRUE(increasing);
  EXPECT_GT(run.iterations, 1);
}

TEST(SteadyLocal, MonotoneIterationDecreasesFromSupersolution) {
  // lambda (1 - x^2) / (2 (1 - 0.5)^2) is a supersolution while it stays below 1/2.
  const Domain& d = interval128();
  const double lambda = 0.1;
  const auto sup = d.sample([&](double x) { return 2.0 * lambda * (1.0 - x * x); });
  DiscreteField prev = sup;
  bool decreasing = true;
  const MonotoneRun run = monotone_iteration(d, lambda, sup, {}, [&](const DiscreteField& w) {
    for (std::size_t j = 0; j < d.size(); ++j)
      if (w[j] > prev[j] + 1e-14) decreasing = false;
    prev = w;
  });
  EXPECT_TRUE(run.converged);
  EXPECT_TRUE(decreasing);
  const auto w = minimal_solution(d, lambda);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(run.w[j], w[j], 1e-7);
}

TEST(SteadyLocal, PullInVoltageInterval) {
  const SteadyBranch& br = interval_branch();
  EXPECT_NEAR(br.lambda_star, 0.35, 5e-3);
  EXPECT_LE(br.fold_upper - br.fold_lower, 1e-6 * br.fold_upper);
  EXPECT_LT(br.fold_lower, br.fold_upper);
  EXPECT_LT(max_value(w_star(br)), 1.0 - 1e-3);
  EXPECT_GT(max_value(w_star(br)), 0.3);
  EXPECT_EQ(w_star(br).values, br.w_star.values);
}

TEST(SteadyLocal, BranchIsIncreasingAndStable) {
  const SteadyBranch& br = interval_branch();
  ASSERT_GE(br.points.size(), 5u);
  for (std::size_t k = 1; k < br.points.size(); ++k) {
    EXPECT_GT(br.points[k].lambda, br.points[k - 1].lambda);
    EXPECT_GE(br.points[k].sup_w, br.points[k - 1].sup_w);
  }
  for (const auto& p : br.points) EXPECT_GT(p.lin_eig, 0.0);
  EXPECT_NEAR(br.points.back().lambda, br.fold_lower, 0.0);
}

TEST(SteadyLocal, LinearizationDegeneratesAtFold) {
  const SteadyBranch& br = interval_branch();
  EXPECT_LE(br.points.back().lin_eig, 0.05 * br.mu1);
}

TEST(SteadyLocal, BeyondFoldHasNoSolution) {
  const SteadyBranch& br = interval_branch();
  try {
    minimal_solution(interval128(), 1.1 * br.lambda_star);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoSteadyState);
  }
}

TEST(SteadyLocal, DiskPullInVoltage) {
  const Domain d = build_domain(DomainSpec::ball(1.0, 2, 128));
  const SteadyBranch br = pull_in_voltage(d);
  EXPECT_NEAR(br.lambda_star, 0.789, 5e-3);
}

TEST(SteadyLocal, ResidualOfExactProfileIsZero) {
  const Domain& d = interval128();
  EXPECT_EQ(steady_residual(d, 0.0, d.zeros()), 0.0);
  EXPECT_NEAR(steady_residual(d, 0.2, d.zeros()), 0.2, 1e-14);
}
