#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mems/error.hpp"
#include "mems/spectral.hpp"
#include "mems/steady_local.hpp"

using namespace mems;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kJ01 = 2.404825557695773;
}  // namespace

TEST(Spectral, IntervalEigenpair) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 256));
  const EigenPair e = principal_eigenpair(d);
  EXPECT_NEAR(e.mu1, kPi * kPi / 4.0, 1e-4);
  EXPECT_NEAR(integrate(d, e.phi1), 1.0, 1e-8);
  EXPECT_NEAR(e.phi1[d.size() / 2], kPi / 4.0, 1e-3);
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) EXPECT_GT(e.phi1[j], 0.0);
}

TEST(Spectral, EigenvalueScalesWithWidth) {
  const Domain d = build_domain(DomainSpec::interval(2.0, 256));
  EXPECT_NEAR(principal_eigenpair(d).mu1, kPi * kPi / 16.0, 1e-4);
}

TEST(Spectral, BallEigenvalues) {
  EXPECT_NEAR(principal_eigenpair(build_domain(DomainSpec::ball(1.0, 2, 256))).mu1, kJ01 * kJ01, 1e-3);
  // In three dimensions the principal eigenfunction is sin(pi r) / r.
  EXPECT_NEAR(principal_eigenpair(build_domain(DomainSpec::ball(1.0, 3, 256))).mu1, kPi * kPi, 1e-3);
  // A one-dimensional ball is the interval seen from its centre.
  EXPECT_NEAR(principal_eigenpair(build_domain(DomainSpec::ball(1.0, 1, 256))).mu1, kPi * kPi / 4.0, 1e-4);
}

TEST(Spectral, EigenEquationResidual) {
  for (const auto& spec : {DomainSpec::interval(1.0, 128), DomainSpec::ball(1.0, 2, 128)}) {
    const Domain d = build_domain(spec);
    const EigenPair e = principal_eigenpair(d);
    const auto lap = apply_laplacian(d, e.phi1);
    double worst = 0.0;
    for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j)
      worst = std::max(worst, std::abs(lap[j] + e.mu1 * e.phi1[j]));
    EXPECT_LE(worst, 1e-6 * e.mu1 * max_abs(e.phi1));
  }
}

TEST(Spectral, SecondOrderConvergence) {
  const double exact = kPi * kPi / 4.0;
  const double e1 = std::abs(principal_eigenpair(build_domain(DomainSpec::interval(1.0, 63))).mu1 - exact);
  const double e2 = std::abs(principal_eigenpair(build_domain(DomainSpec::interval(1.0, 127))).mu1 - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(Spectral, LinearizedAtZeroIsMu1) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  const double mu1 = principal_eigenpair(d).mu1;
  EXPECT_NEAR(linearized_eigenvalue(d, 0.0, d.zeros()), mu1, 1e-9 * mu1);
  EXPECT_NEAR(linearized_eigenvalue(d, 0.0, d.constant(0.3)), mu1, 1e-9 * mu1);
}

TEST(Spectral, LinearizedConstantPotentialShift) {
  // With w constant in the interior the potential is a constant shift.
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  const double mu1 = principal_eigenpair(d).mu1;
  DiscreteField w = d.constant(0.2);
  const double p = 2.0 * 0.1 / std::pow(0.8, 3);
  EXPECT_NEAR(linearized_eigenvalue(d, 0.1, w), mu1 - p, 1e-8);
}

TEST(Spectral, LinearizedRejectsTouchdown) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 32));
  DiscreteField w = d.zeros();
  w.values[10] = 1.0;
  try {
    linearized_eigenvalue(d, 0.1, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FieldOutOfRange);
  }
}

TEST(Spectral, RayleighQuotient) {
  const Domain d = build_domain(DomainSpec::ball(1.0, 2, 128));
  const EigenPair e = principal_eigenpair(d);
  std::vector<double> zero(d.size(), 0.0), shift(d.size(), 1.5);
  EXPECT_NEAR(rayleigh_quotient(d, e.phi1, zero), e.mu1, 1e-9);
  EXPECT_NEAR(rayleigh_quotient(d, e.phi1, shift), e.mu1 + 1.5, 1e-9);
  // Any other function gives a larger quotient.
  EXPECT_GT(rayleigh_quotient(d, d.sample([](double r) { return 1.0 - r; }), zero), e.mu1);
}

TEST(Spectral, LinearizedPositiveBelowFold) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 128));
  const SteadyBranch br = pull_in_voltage(d);
  const double lambda = 0.5 * br.lambda_star;
  const double eig = linearized_eigenvalue(d, lambda, minimal_solution(d, lambda));
  EXPECT_GT(eig, 0.0);
  const LinearizedMode mode = linearized_mode(d, lambda, minimal_solution(d, lambda));
  EXPECT_NEAR(mode.eigenvalue, eig, 1e-10);
  double norm = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) norm += d.weights()[j] * mode.mode[j] * mode.mode[j];
  EXPECT_NEAR(norm, 1.0, 1e-10);
}
