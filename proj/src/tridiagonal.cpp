#include "mems/tridiagonal.hpp"

#include <cmath>

#include "mems/error.hpp"

namespace mems {

std::vector<double> SymTridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

SymTridiagonal SymTridiagonal::plus_diagonal(std::span<const double> shift) const {
  SymTridiagonal out = *this;
  for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += shift[i];
  return out;
}

SymTridiagonal SymTridiagonal::scaled(double s) const {
  SymTridiagonal out = *this;
  for (double& v : out.diag) v *= s;
  for (double& v : out.off) v *= s;
  return out;
}

std::optional<std::vector<double>> solve_spd(const SymTridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0), x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double piv = a.diag[i];
    if (i > 0) piv -= l[i - 1] * l[i - 1] * d[i - 1];
    if (!(piv > 0.0)) return std::nullopt;
    d[i] = piv;
    if (i + 1 < n) l[i] = a.off[i] / piv;
  }
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n; i-- > 1;) x[i - 1] -= l[i - 1] * x[i];
  return x;
}

std::vector<double> solve_tridiagonal(const SymTridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  std::vector<double> c(n), x(rhs.begin(), rhs.end());
  double piv = a.diag[0];
  if (piv == 0.0) throw Error(ErrorKind::SingularSystem, "zero pivot in tridiagonal solve");
  c[0] = n > 1 ? a.off[0] / piv : 0.0;
  x[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = a.diag[i] - a.off[i - 1] * c[i - 1];
    if (piv == 0.0) throw Error(ErrorKind::SingularSystem, "zero pivot in tridiagonal solve");
    c[i] = i + 1 < n ? a.off[i] / piv : 0.0;
    x[i] = (x[i] - a.off[i - 1] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

SpdFactorization::SpdFactorization(const SymTridiagonal& a) : pivot_(a.size()), lower_(a.size()) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double piv = a.diag[i];
    if (i > 0) piv -= lower_[i - 1] * lower_[i - 1] * pivot_[i - 1];
    if (!(piv > 0.0)) throw Error(ErrorKind::SingularSystem, "matrix is not positive definite");
    pivot_[i] = piv;
    lower_[i] = i + 1 < n ? a.off[i] / piv : 0.0;
  }
}

std::vector<double> SpdFactorization::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

void SpdFactorization::solve_in_place(std::vector<double>& x) const {
  const std::size_t n = pivot_.size();
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= pivot_[i];
  for (std::size_t i = n; i-- > 1;) x[i - 1] -= lower_[i - 1] * x[i];
}

}  // namespace mems
