#include "mems/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "mems/error.hpp"

namespace mems {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t spec_id(const DomainSpec& s) {
  std::uint64_t h = 1469598103934665603ull;
  h = fnv1a(h, static_cast<std::uint64_t>(s.kind));
  h = fnv1a(h, std::bit_cast<std::uint64_t>(s.extent));
  h = fnv1a(h, static_cast<std::uint64_t>(s.dim));
  h = fnv1a(h, static_cast<std::uint64_t>(s.resolution));
  return h;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::FieldOutOfRange: return "FieldOutOfRange";
    case ErrorKind::NoSteadyState: return "NoSteadyState";
    case ErrorKind::EmptyBranch: return "EmptyBranch";
    case ErrorKind::RootOutOfRange: return "RootOutOfRange";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorKind::InvalidInitialData: return "InvalidInitialData";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::IncompatibleRuns: return "IncompatibleRuns";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::CeilingViolation: return "CeilingViolation";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Domain build_domain(const DomainSpec& spec) {
  if (!(spec.extent > 0.0) || !std::isfinite(spec.extent))
    throw Error(ErrorKind::InvalidSpec, "half width / radius must be positive");
  if (spec.resolution < 16) throw Error(ErrorKind::InvalidSpec, "resolution must be >= 16");
  if (spec.dim < 1) throw Error(ErrorKind::InvalidSpec, "dimension must be >= 1");
  if (spec.kind == DomainKind::Interval && spec.dim != 1)
    throw Error(ErrorKind::InvalidSpec, "an interval is one-dimensional");

  Domain d;
  d.spec_ = spec;
  d.id_ = spec_id(spec);
  const std::size_t m = static_cast<std::size_t>(spec.resolution);
  const std::size_t n_nodes = m + 2;
  d.nodes_.resize(n_nodes);
  d.weights_.resize(n_nodes);
  d.conductances_.resize(n_nodes - 1);

  if (spec.kind == DomainKind::Interval) {
    const double b = spec.extent;
    const double h = 2.0 * b / static_cast<double>(m + 1);
    d.spacing_ = h;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      d.nodes_[i] = -b + static_cast<double>(i) * h;
      d.weights_[i] = h;
    }
    d.nodes_.back() = b;
    d.weights_.front() = d.weights_.back() = 0.5 * h;
    std::fill(d.conductances_.begin(), d.conductances_.end(), 1.0 / h);
    d.first_unknown_ = 1;
    d.end_unknown_ = n_nodes - 1;
    d.volume_ = 2.0 * b;
    d.boundary_measure_ = 2.0;
  } else {
    const int n = spec.dim;
    const double radius = spec.extent;
    const double h = radius / static_cast<double>(m + 1);
    const double omega = unit_sphere_area(n);
    d.spacing_ = h;
    auto ball_volume = [&](double r) { return omega / n * std::pow(r, n); };
    for (std::size_t j = 0; j < n_nodes; ++j) {
      d.nodes_[j] = static_cast<double>(j) * h;
      const double r_lo = j == 0 ? 0.0 : (static_cast<double>(j) - 0.5) * h;
      const double r_hi = j + 1 == n_nodes ? radius : (static_cast<double>(j) + 0.5) * h;
      d.weights_[j] = ball_volume(r_hi) - ball_volume(r_lo);
    }
    d.nodes_.back() = radius;
    for (std::size_t j = 0; j + 1 < n_nodes; ++j) {
      const double r_face = (static_cast<double>(j) + 0.5) * h;
      d.conductances_[j] = omega * std::pow(r_face, n - 1) / h;
    }
    d.first_unknown_ = 0;
    d.end_unknown_ = n_nodes - 1;
    d.volume_ = ball_volume(radius);
    d.boundary_measure_ = omega * std::pow(radius, n - 1);
  }

  const std::size_t lo = d.first_unknown_, hi = d.end_unknown_;
  SymTridiagonal s;
  s.diag.resize(hi - lo);
  s.off.resize(hi - lo - 1);
  for (std::size_t j = lo; j < hi; ++j) {
    const double left = j > 0 ? d.conductances_[j - 1] : 0.0;
    s.diag[j - lo] = left + d.conductances_[j];
    if (j + 1 < hi) s.off[j - lo] = -d.conductances_[j];
  }
  d.stiffness_ = std::move(s);
  return d;
}

DiscreteField Domain::zeros() const { return DiscreteField{id_, std::vector<double>(size(), 0.0)}; }

DiscreteField Domain::constant(double value) const {
  return DiscreteField{id_, std::vector<double>(size(), value)};
}

void Domain::check(const DiscreteField& f) const {
  if (f.domain_id != id_ || f.values.size() != size())
    throw Error(ErrorKind::DomainMismatch, "field is not bound to this domain");
}

double integrate(const Domain& d, const DiscreteField& f) {
  d.check(f);
  const auto w = d.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i];
  return s;
}

DiscreteField apply_laplacian(const Domain& d, const DiscreteField& f) {
  d.check(f);
  DiscreteField out = d.zeros();
  const auto c = d.conductances();
  const auto w = d.weights();
  const auto& u = f.values;
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j) {
    double flux = c[j] * (u[j + 1] - u[j]);
    if (j > 0) flux -= c[j - 1] * (u[j] - u[j - 1]);
    out.values[j] = flux / w[j];
  }
  return out;
}

std::vector<double> restrict_unknowns(const Domain& d, const DiscreteField& f) {
  d.check(f);
  return {f.values.begin() + static_cast<std::ptrdiff_t>(d.first_unknown()),
          f.values.begin() + static_cast<std::ptrdiff_t>(d.end_unknown())};
}

DiscreteField extend_unknowns(const Domain& d, std::span<const double> x) {
  DiscreteField out = d.zeros();
  std::copy(x.begin(), x.end(), out.values.begin() + static_cast<std::ptrdiff_t>(d.first_unknown()));
  return out;
}

DiscreteField solve_poisson(const Domain& d, const DiscreteField& rhs) {
  d.check(rhs);
  const auto w = d.weights();
  std::vector<double> b(d.unknown_count());
  for (std::size_t j = d.first_unknown(); j < d.end_unknown(); ++j)
    b[j - d.first_unknown()] = w[j] * rhs.values[j];
  auto x = solve_spd(d.stiffness(), b);
  if (!x) throw Error(ErrorKind::SingularSystem, "Dirichlet stiffness matrix lost definiteness");
  return extend_unknowns(d, *x);
}

double dirichlet_energy(const Domain& d, const DiscreteField& f) {
  d.check(f);
  const auto c = d.conductances();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < f.values.size(); ++j) {
    const double du = f.values[j + 1] - f.values[j];
    s += c[j] * du * du;
  }
  return 0.5 * s;
}

double max_abs(const DiscreteField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_value(const DiscreteField& f) {
  return f.values.empty() ? 0.0 : *std::max_element(f.values.begin(), f.values.end());
}

}  // namespace mems
