#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mems/error.hpp"
#include "mems/geometry.hpp"

using namespace mems;

namespace {

constexpr double kPi = std::numbers::pi;

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

TEST(Geometry, IntervalVolume) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 256));
  EXPECT_NEAR(d.volume(), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(d.boundary_measure(), 2.0);
  EXPECT_EQ(d.size(), 258u);
  EXPECT_EQ(d.unknown_count(), 256u);
}

TEST(Geometry, DiskVolumeAndBoundary) {
  const Domain d = build_domain(DomainSpec::ball(1.0, 2, 256));
  EXPECT_NEAR(d.volume(), kPi, 1e-10);
  EXPECT_NEAR(d.boundary_measure(), 2.0 * kPi, 1e-12);
  EXPECT_DOUBLE_EQ(d.convexity_constant(), 1.0);
  EXPECT_EQ(d.unknown_count(), 257u);  // centre included
}

TEST(Geometry, WeightsPositiveAndSumToVolume) {
  for (int n = 1; n <= 5; ++n) {
    const Domain d = build_domain(DomainSpec::ball(1.7, n, 64));
    double sum = 0.0;
    for (double w : d.weights()) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    const double exact = unit_sphere_area(n) * std::pow(1.7, n) / n;
    EXPECT_NEAR(sum / exact, 1.0, 1e-10) << "n = " << n;
  }
}

TEST(Geometry, SphereArea) {
  EXPECT_DOUBLE_EQ(unit_sphere_area(1), 2.0);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * kPi, 1e-13);
}

TEST(Geometry, InvalidSpecs) {
  expect_error(ErrorKind::InvalidSpec, [] { build_domain(DomainSpec::interval(0.0, 64)); });
  expect_error(ErrorKind::InvalidSpec, [] { build_domain(DomainSpec::interval(-1.0, 64)); });
  expect_error(ErrorKind::InvalidSpec, [] { build_domain(DomainSpec::interval(1.0, 15)); });
  expect_error(ErrorKind::InvalidSpec, [] { build_domain(DomainSpec::ball(1.0, 0, 64)); });
  expect_error(ErrorKind::InvalidSpec, [] { build_domain({DomainKind::Interval, 1.0, 2, 64}); });
  EXPECT_NO_THROW(build_domain(DomainSpec::interval(1.0, 16)));
}

TEST(Geometry, IdentityFollowsDescription) {
  const Domain a = build_domain(DomainSpec::interval(1.0, 64));
  const Domain b = build_domain(DomainSpec::interval(1.0, 64));
  const Domain c = build_domain(DomainSpec::interval(1.0, 65));
  const Domain e = build_domain(DomainSpec::ball(1.0, 1, 64));
  EXPECT_EQ(a.id(), b.id());
  EXPECT_NE(a.id(), c.id());
  EXPECT_NE(a.id(), e.id());
  EXPECT_NO_THROW(integrate(a, b.constant(1.0)));
  expect_error(ErrorKind::DomainMismatch, [&] { integrate(a, c.constant(1.0)); });
  expect_error(ErrorKind::DomainMismatch, [&] { apply_laplacian(a, e.zeros()); });
}

TEST(Geometry, IntegrateConstants) {
  EXPECT_NEAR(integrate(build_domain(DomainSpec::interval(1.0, 64)), build_domain(DomainSpec::interval(1.0, 64)).constant(1.0)), 2.0, 1e-13);
  const Domain ball = build_domain(DomainSpec::ball(1.0, 3, 128));
  EXPECT_NEAR(integrate(ball, ball.constant(1.0)), 4.0 * kPi / 3.0, 1e-8);
}

TEST(Geometry, IntegrateQuadratic) {
  // Trapezoid-type weights: error ~ h^2 / 3, so a fine grid reaches 1e-6.
  const Domain d = build_domain(DomainSpec::interval(1.0, 4095));
  const auto f = d.sample([](double x) { return x * x; });
  EXPECT_NEAR(integrate(d, f), 2.0 / 3.0, 1e-6);
  const Domain coarse = build_domain(DomainSpec::interval(1.0, 255));
  const double e1 = std::abs(integrate(coarse, coarse.sample([](double x) { return x * x; })) - 2.0 / 3.0);
  const Domain fine = build_domain(DomainSpec::interval(1.0, 511));
  const double e2 = std::abs(integrate(fine, fine.sample([](double x) { return x * x; })) - 2.0 / 3.0);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(Geometry, LaplacianOfQuadratics) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 100));
  const auto lap = apply_laplacian(d, d.sample([](double x) { return x * x; }));
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) EXPECT_NEAR(lap[j], 2.0, 1e-8);
  EXPECT_EQ(lap[0], 0.0);
  EXPECT_EQ(lap[d.size() - 1], 0.0);

  const auto flat = apply_laplacian(d, d.constant(3.5));
  for (double v : flat.values) EXPECT_NEAR(v, 0.0, 1e-9);

  for (int n : {2, 3, 5}) {
    const Domain ball = build_domain(DomainSpec::ball(1.0, n, 90));
    const auto lb = apply_laplacian(ball, ball.sample([](double r) { return 1.0 - r * r; }));
    for (std::size_t j = ball.first_unknown(); j < ball.end_unknown(); ++j) EXPECT_NEAR(lb[j], -2.0 * n, 1e-6);
  }
}

TEST(Geometry, PoissonExactSolutions) {
  // Odd M puts a node at the centre.
  const Domain d = build_domain(DomainSpec::interval(1.0, 201));
  const auto g = solve_poisson(d, d.constant(1.0));
  EXPECT_NEAR(max_value(g), 0.5, 1e-6);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(g[j], 0.5 * (1.0 - d.nodes()[j] * d.nodes()[j]), 1e-10);

  const Domain disk = build_domain(DomainSpec::ball(1.0, 2, 200));
  const auto gd = solve_poisson(disk, disk.constant(1.0));
  EXPECT_NEAR(max_value(gd), 0.25, 1e-6);
  for (std::size_t j = 0; j < disk.size(); ++j) EXPECT_NEAR(gd[j], 0.25 * (1.0 - disk.nodes()[j] * disk.nodes()[j]), 1e-10);

  const auto z = solve_poisson(d, d.zeros());
  EXPECT_EQ(max_abs(z), 0.0);
}

TEST(Geometry, PoissonInvertsLaplacian) {
  const Domain d = build_domain(DomainSpec::ball(2.0, 3, 64));
  const auto f = d.sample([](double r) { return std::cos(r) + 0.1 * r; });
  const auto g = solve_poisson(d, f);
  const auto lap = apply_laplacian(d, g);
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) EXPECT_NEAR(-lap[j], f[j], 1e-9);
  EXPECT_EQ(g[d.size() - 1], 0.0);
}

TEST(Geometry, DirichletEnergyConverges) {
  // u = 1 - x^2: (1/2) int (2x)^2 = 4/3.
  const Domain d = build_domain(DomainSpec::interval(1.0, 255));
  EXPECT_NEAR(dirichlet_energy(d, d.sample([](double x) { return 1.0 - x * x; })), 4.0 / 3.0, 1e-4);
  // u = 1 - r^2 on the unit disk: (1/2) int 4 r^2 = pi.
  const Domain disk = build_domain(DomainSpec::ball(1.0, 2, 255));
  EXPECT_NEAR(dirichlet_energy(disk, disk.sample([](double r) { return 1.0 - r * r; })), kPi, 1e-4);
  EXPECT_EQ(dirichlet_energy(d, d.zeros()), 0.0);
}

TEST(Geometry, RestrictExtendRoundTrip) {
  const Domain d = build_domain(DomainSpec::ball(1.0, 2, 32));
  auto f = d.sample([](double r) { return 1.0 - r; });
  const auto x = restrict_unknowns(d, f);
  EXPECT_EQ(x.size(), d.unknown_count());
  const auto back = extend_unknowns(d, x);
  EXPECT_EQ(back.domain_id, d.id());
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_DOUBLE_EQ(back[j], d.is_boundary(j) ? 0.0 : f[j]);
}

TEST(Geometry, NormsAndHelpers) {
  const Domain d = build_domain(DomainSpec::interval(1.0, 16));
  const auto f = d.sample([](double x) { return -2.0 * x; });
  EXPECT_NEAR(max_abs(f), 2.0, 1e-14);
  EXPECT_NEAR(max_value(f), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(d.spacing(), 2.0 / 17.0);
  EXPECT_TRUE(d.is_boundary(0));
  EXPECT_FALSE(d.is_boundary(1));
}
