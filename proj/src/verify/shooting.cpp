#include "mems/verify/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mems::oracle {

namespace {

using State = std::array<double, 3>;  // W, W', int_0^r omega rho^{n-1} / (1 - W)

double sphere_area(int n) {
  if (n == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

struct Rhs {
  int n;
  double omega;
  State operator()(double r, const State& y) const {
    const double gap = 1.0 - y[0];
    return {y[1], -1.0 / (gap * gap) - (n - 1) / r * y[1], omega * std::pow(r, n - 1) / gap};
  }
};

State rk4(const Rhs& f, double r, const State& y, double h) {
  auto add = [](const State& a, const State& b, double c) {
    return State{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
  };
  const State k1 = f(r, y);
  const State k2 = f(r + 0.5 * h, add(y, k1, 0.5 * h));
  const State k3 = f(r + 0.5 * h, add(y, k2, 0.5 * h));
  const State k4 = f(r + h, add(y, k3, h));
  State out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Series start W = s - g r^2 / (2n), g = 1/(1 - s)^2.
State series_start(double s, int n, double omega, double r) {
  const double g = 1.0 / ((1.0 - s) * (1.0 - s));
  return {s - g * r * r / (2.0 * n), -g * r / n, omega * std::pow(r, n) / (n * (1.0 - s))};
}

double start_radius(const ShootingOptions& opts) { return 1e-2 * opts.dr; }

}  // namespace

Shot shoot(double s, int dim, double radius, const ShootingOptions& opts) {
  if (!(s > 0.0) || !(s < 1.0) || dim < 1 || !(radius > 0.0)) throw std::invalid_argument("bad shooting input");
  const Rhs f{dim, sphere_area(dim)};
  double r = start_radius(opts);
  State y = series_start(s, dim, f.omega, r);
  for (;;) {
    const State next = rk4(f, r, y, opts.dr);
    if (next[0] <= 0.0) {
      // Secant on the length of the last partial step.
      double a = 0.0, fa = y[0], b = opts.dr, fb = next[0];
      for (int it = 0; it < 60 && std::abs(b - a) > 1e-16; ++it) {
        const double c = b - fb * (b - a) / (fb - fa);
        const double fc = rk4(f, r, y, c)[0];
        a = b; fa = fb; b = c; fb = fc;
        if (fc == 0.0) break;
      }
      const State end = rk4(f, r, y, b);
      Shot shot;
      shot.s = s;
      shot.r0 = r + b;
      shot.lambda = shot.r0 * shot.r0 / (radius * radius);
      shot.capacitance = end[2] * std::pow(shot.lambda, -0.5 * dim);
      return shot;
    }
    r += opts.dr;
    y = next;
  }
}

ShootingFold shooting_pull_in(int dim, double radius, const ShootingOptions& opts) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.02, b = 0.98;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = shoot(c, dim, radius, opts).lambda, fe = shoot(e, dim, radius, opts).lambda;
  while (b - a > 1e-9) {
    if (fc > fe) {
      b = e; e = c; fe = fc;
      c = b - g * (b - a); fc = shoot(c, dim, radius, opts).lambda;
    } else {
      a = c; c = e; fc = fe;
      e = a + g * (b - a); fe = shoot(e, dim, radius, opts).lambda;
    }
  }
  const double s = 0.5 * (a + b);
  return {shoot(s, dim, radius, opts).lambda, s};
}

namespace {

Shot lower_branch(double lambda, const ShootingFold& fold, int dim, double radius, const ShootingOptions& opts) {
  if (!(lambda > 0.0) || !(lambda < fold.lambda_star)) throw std::invalid_argument("lambda outside (0, lambda*)");
  double lo = 0.0, hi = fold.s_star;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    (shoot(mid, dim, radius, opts).lambda < lambda ? lo : hi) = mid;
  }
  return shoot(0.5 * (lo + hi), dim, radius, opts);
}

}  // namespace

Shot shooting_minimal(double lambda, int dim, double radius, const ShootingOptions& opts) {
  return lower_branch(lambda, shooting_pull_in(dim, radius, opts), dim, radius, opts);
}

std::vector<double> shooting_profile(const Shot& shot, int dim, double radius, const std::vector<double>& r,
                                     const ShootingOptions& opts) {
  const Rhs f{dim, sphere_area(dim)};
  const double scale = std::sqrt(shot.lambda);
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return std::abs(r[i]) < std::abs(r[j]); });

  std::vector<double> out(r.size(), 0.0);
  double rho = start_radius(opts);
  State y = series_start(shot.s, dim, f.omega, rho);
  for (std::size_t idx : order) {
    const double target = std::abs(r[idx]) * scale;
    if (std::abs(r[idx]) >= radius) continue;
    if (target <= rho) {
      const double g = 1.0 / ((1.0 - shot.s) * (1.0 - shot.s));
      out[idx] = shot.s - g * target * target / (2.0 * dim);
      continue;
    }
    while (rho + opts.dr < target) {
      y = rk4(f, rho, y, opts.dr);
      rho += opts.dr;
    }
    out[idx] = rk4(f, rho, y, target - rho)[0];
  }
  return out;
}

double shooting_nonlocal_root(double chi, double lambda, int dim, double radius, const ShootingOptions& opts) {
  const ShootingFold fold = shooting_pull_in(dim, radius, opts);
  auto h = [&](double mu) {
    if (mu <= 0.0) return 0.0;
    const Shot shot = mu >= fold.lambda_star ? shoot(fold.s_star, dim, radius, opts)
                                             : lower_branch(mu, fold, dim, radius, opts);
    const double f = 1.0 + chi * shot.capacitance;
    return mu * f * f;
  };
  double lo = 0.0, hi = fold.lambda_star * (1.0 - 1e-9);
  if (!(h(hi) >= lambda)) throw std::invalid_argument("lambda above the resolvable range");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mems::oracle
