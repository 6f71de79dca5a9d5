#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mems/tridiagonal.hpp"

namespace mems {

enum class DomainKind { Interval, Ball };

/// Admissible geometries: the symmetric interval (-b, b) or the ball B_R in
/// `dim` dimensions, the latter reduced to the radial coordinate.
struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  double extent = 1.0;  // half width b or radius R
  int dim = 1;
  int resolution = 128;  // interior nodes M

  static DomainSpec interval(double half_width, int resolution) {
    return {DomainKind::Interval, half_width, 1, resolution};
  }
  static DomainSpec ball(double radius, int dim, int resolution) {
    return {DomainKind::Ball, radius, dim, resolution};
  }
};

/// Nodal values bound to one Domain (boundary nodes included).
struct DiscreteField {
  std::uint64_t domain_id = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Uniform vertex-centred finite-volume discretisation.
///
/// Interval: nodes x_i = -b + i h, i = 0..M+1, h = 2b/(M+1); both end nodes
/// carry the Dirichlet value. Ball: nodes r_j = j h, j = 0..M+1, h = R/(M+1);
/// the centre is an unknown and r = R carries the Dirichlet value.
///
/// Each node owns the control volume between neighbouring midpoints, measured
/// exactly (omega_{n-1}/n (r_+^n - r_-^n) for balls), so the weights sum to
/// |Omega| up to rounding. Faces carry conductances A(r_{j+1/2})/h, which makes
/// the discrete Laplacian symmetric with respect to the weights and reduces to
/// n u_rr(0) at the ball centre.
class Domain {
 public:
  const DomainSpec& spec() const { return spec_; }
  std::uint64_t id() const { return id_; }

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// Conductance of the face between node j and j+1.
  std::span<const double> conductances() const { return conductances_; }

  /// Unknown nodes are [first_unknown(), end_unknown()).
  std::size_t first_unknown() const { return first_unknown_; }
  std::size_t end_unknown() const { return end_unknown_; }
  std::size_t unknown_count() const { return end_unknown_ - first_unknown_; }
  bool is_boundary(std::size_t j) const { return j < first_unknown_ || j >= end_unknown_; }

  double spacing() const { return spacing_; }
  double volume() const { return volume_; }
  double boundary_measure() const { return boundary_measure_; }
  /// min over the boundary of x . nu: b for the interval, R for the ball.
  double convexity_constant() const { return spec_.extent; }
  /// Spatial dimension n (1 for the interval).
  int dim() const { return spec_.kind == DomainKind::Interval ? 1 : spec_.dim; }

  /// Stiffness matrix S restricted to unknowns: -Delta = V^{-1} S.
  const SymTridiagonal& stiffness() const { return stiffness_; }

  DiscreteField zeros() const;
  DiscreteField constant(double value) const;
  template <class F>
  DiscreteField sample(F&& f) const {
    DiscreteField out = zeros();
    for (std::size_t j = 0; j < size(); ++j) out.values[j] = f(nodes_[j]);
    return out;
  }

  /// Throws DomainMismatch unless `f` is bound to this domain.
  void check(const DiscreteField& f) const;

  friend Domain build_domain(const DomainSpec& spec);

 private:
  Domain() = default;

  DomainSpec spec_;
  std::uint64_t id_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> conductances_;
  std::size_t first_unknown_ = 0;
  std::size_t end_unknown_ = 0;
  double spacing_ = 0.0;
  double volume_ = 0.0;
  double boundary_measure_ = 0.0;
  SymTridiagonal stiffness_;
};

/// Surface area of the unit sphere S^{n-1} (2 for n = 1).
double unit_sphere_area(int n);

Domain build_domain(const DomainSpec& spec);

/// Quadrature sum_i w_i f_i.
double integrate(const Domain& d, const DiscreteField& f);

/// Discrete Delta f at unknown nodes using the stored neighbour values;
/// boundary entries of the result are 0.
DiscreteField apply_laplacian(const Domain& d, const DiscreteField& f);

/// Solves -Delta g = rhs with g = 0 on the boundary.
DiscreteField solve_poisson(const Domain& d, const DiscreteField& rhs);

/// 1/2 int |grad f|^2 in the discrete (face-difference) form.
double dirichlet_energy(const Domain& d, const DiscreteField& f);

double max_abs(const DiscreteField& f);
double max_value(const DiscreteField& f);

/// Pointwise helpers on unknown nodes.
std::vector<double> restrict_unknowns(const Domain& d, const DiscreteField& f);
DiscreteField extend_unknowns(const Domain& d, std::span<const double> x);

}  // namespace mems
