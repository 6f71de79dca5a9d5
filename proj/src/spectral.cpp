#include "mems/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mems/error.hpp"

namespace mems {

namespace {

double weighted_dot(std::span<const double> v, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += v[i] * a[i] * b[i];
  return s;
}

struct InverseIterationResult {
  double eigenvalue;
  std::vector<double> vector;
  int iterations;
};

// Smallest eigenpair of A x = mu V x (A symmetric tridiagonal, V diagonal
// positive) by inverse iteration on A - shift V, which must be SPD.
InverseIterationResult smallest_generalized(const SymTridiagonal& a, std::span<const double> v, double shift,
                                            const EigenOptions& opts) {
  const std::size_t n = a.size();
  std::vector<double> neg_shift(n);
  for (std::size_t i = 0; i < n; ++i) neg_shift[i] = -shift * v[i];
  const SpdFactorization shifted(a.plus_diagonal(neg_shift));

  std::vector<double> x(n, 1.0), y(n);
  double norm = std::sqrt(weighted_dot(v, x, x));
  for (double& xi : x) xi /= norm;

  double mu_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) y[i] = v[i] * x[i];
    shifted.solve_in_place(y);
    norm = std::sqrt(weighted_dot(v, y, y));
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    std::swap(x, y);
    const auto ax = a.multiply(x);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += x[i] * ax[i];
    const double scale = std::max({std::abs(mu), std::abs(shift), 1.0});
    if (std::abs(mu - mu_prev) <= opts.rel_tol * scale && change <= 1e-10) return {mu, x, it};
    mu_prev = mu;
  }
  throw Error(ErrorKind::NoConvergence, "inverse iteration did not converge");
}

}  // namespace

EigenPair principal_eigenpair(const Domain& d, const EigenOptions& opts) {
  const auto w = d.weights().subspan(d.first_unknown(), d.unknown_count());
  auto res = smallest_generalized(d.stiffness(), w, 0.0, opts);
  EigenPair out;
  out.mu1 = res.eigenvalue;
  out.phi1 = extend_unknowns(d, res.vector);
  const double mass = integrate(d, out.phi1);
  for (double& p : out.phi1.values) p /= mass;
  return out;
}

LinearizedMode linearized_mode(const Domain& d, double lambda, const DiscreteField& w, const EigenOptions& opts) {
  d.check(w);
  const std::size_t lo = d.first_unknown();
  const auto weights = d.weights().subspan(lo, d.unknown_count());
  std::vector<double> mass_potential(d.unknown_count());
  double p_max = 0.0;
  for (std::size_t i = 0; i < mass_potential.size(); ++i) {
    const double wi = w.values[lo + i];
    if (!(wi < 1.0)) throw Error(ErrorKind::FieldOutOfRange, "linearization requires w < 1");
    const double p = 2.0 * lambda / std::pow(1.0 - wi, 3);
    p_max = std::max(p_max, p);
    mass_potential[i] = -p * weights[i];
  }
  const SymTridiagonal op = d.stiffness().plus_diagonal(mass_potential);
  // -Delta >= 0, so the spectrum lies above -max p.
  const double shift = -p_max - 1.0;
  auto res = smallest_generalized(op, weights, shift, opts);
  return {res.eigenvalue, extend_unknowns(d, res.vector), res.iterations};
}

double linearized_eigenvalue(const Domain& d, double lambda, const DiscreteField& w, const EigenOptions& opts) {
  return linearized_mode(d, lambda, w, opts).eigenvalue;
}

double rayleigh_quotient(const Domain& d, const DiscreteField& u, std::span<const double> potential) {
  d.check(u);
  const auto w = d.weights();
  double num = 2.0 * dirichlet_energy(d, u), den = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    num += w[j] * potential[j] * u.values[j] * u.values[j];
    den += w[j] * u.values[j] * u.values[j];
  }
  return num / den;
}

}  // namespace mems
