#pragma once

#include <optional>
#include <span>
#include <vector>

namespace mems {

/// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const;

  /// A + diag(shift)
  SymTridiagonal plus_diagonal(std::span<const double> shift) const;
  SymTridiagonal scaled(double s) const;
};

/// LDL^T solve. Returns nullopt if a pivot is not strictly positive, i.e. the
/// matrix is not positive definite.
std::optional<std::vector<double>> solve_spd(const SymTridiagonal& a, std::span<const double> rhs);

/// Thomas algorithm without the definiteness requirement; throws
/// SingularSystem on a zero pivot.
std::vector<double> solve_tridiagonal(const SymTridiagonal& a, std::span<const double> rhs);

/// Pre-factored SPD system for repeated solves with one matrix.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SymTridiagonal& a);
  std::vector<double> solve(std::span<const double> rhs) const;
  void solve_in_place(std::vector<double>& x) const;

 private:
  std::vector<double> pivot_;
  std::vector<double> lower_;
};

}  // namespace mems
