#pragma once

#include "mems/geometry.hpp"

namespace mems {

/// Principal Dirichlet eigenpair of -Delta, phi1 > 0 with int phi1 = 1.
struct EigenPair {
  double mu1 = 0.0;
  DiscreteField phi1;
};

struct EigenOptions {
  double rel_tol = 1e-12;
  int max_iterations = 100000;
};

/// Inverse power iteration with shift 0.
EigenPair principal_eigenpair(const Domain& d, const EigenOptions& opts = {});

struct LinearizedMode {
  double eigenvalue = 0.0;
  DiscreteField mode;  // unit weighted-L2 norm
  int iterations = 0;
};

/// Smallest eigenvalue of -Delta - 2 lambda / (1 - w)^3 with its eigenvector,
/// by inverse iteration shifted below the spectrum.
LinearizedMode linearized_mode(const Domain& d, double lambda, const DiscreteField& w,
                               const EigenOptions& opts = {});

double linearized_eigenvalue(const Domain& d, double lambda, const DiscreteField& w,
                             const EigenOptions& opts = {});

/// Rayleigh quotient (u, -Delta u + q u) / (u, u) with potential q.
double rayleigh_quotient(const Domain& d, const DiscreteField& u, std::span<const double> potential);

}  // namespace mems
