#include <gtest/gtest.h>

#include <cmath>

#include "mems/steady_local.hpp"
#include "mems/steady_nonlocal.hpp"
#include "mems/verify/shooting.hpp"

using namespace mems;
using namespace mems::oracle;

TEST(Shooting, SmallAmplitudeIsLinear) {
  // W ~ s - r^2 / (2n) near s = 0, so r0^2 ~ 2 n s.
  for (int n : {1, 2, 3}) {
    const Shot shot = shoot(1e-4, n, 1.0);
    EXPECT_NEAR(shot.lambda / (2.0 * n * 1e-4), 1.0, 1e-3) << "n = " << n;
  }
}

TEST(Shooting, KnownPullInVoltages) {
  EXPECT_NEAR(shooting_pull_in(1, 1.0).lambda_star, 0.35004, 1e-4);
  EXPECT_NEAR(shooting_pull_in(2, 1.0).lambda_star, 0.78922, 1e-4);
}

TEST(Shooting, RadiusScaling) {
  const double a = shooting_pull_in(2, 1.0).lambda_star;
  const double b = shooting_pull_in(2, 2.0).lambda_star;
  EXPECT_NEAR(b, a / 4.0, 1e-8);
}

TEST(Shooting, MinimalShotHitsLambda) {
  const Shot shot = shooting_minimal(0.2, 1, 1.0);
  EXPECT_NEAR(shot.lambda, 0.2, 1e-10);
  EXPECT_LT(shot.s, shooting_pull_in(1, 1.0).s_star);
  EXPECT_GT(shot.capacitance, 2.0);
}

TEST(Shooting, AgreesWithFiniteVolumes) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 255));
  const auto w = minimal_solution(d, 0.2);
  const Shot shot = shooting_minimal(0.2, 1, 1.0);
  std::vector<double> r;
  for (double x : d.nodes()) r.push_back(std::abs(x));
  const auto prof = shooting_profile(shot, 1, 1.0, r);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(prof[j], w[j], 1e-4);
}

TEST(Shooting, SmallVoltageProfile) {
  const Shot shot = shooting_minimal(0.01, 1, 1.0);
  EXPECT_NEAR(shot.s, 0.00501, 5e-4);
  // Second-order expansion lambda / 2 + (5 / 12) lambda^2, up to O(lambda^3).
  EXPECT_NEAR(shot.s, 0.005 + 5.0 / 12.0 * 1e-4, 2e-6);
}

TEST(Shooting, NonlocalRootAgrees) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 255));
  const NonlocalSolution sol = solve_nonlocal_steady(d, 1.0, 1.0);
  EXPECT_NEAR(shooting_nonlocal_root(1.0, 1.0, 1, 1.0), sol.mu_root, 1e-4);
}
