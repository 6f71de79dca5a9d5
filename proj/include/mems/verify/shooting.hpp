#pragma once

#include <vector>

// Radial shooting for the local steady equation. Independent of the finite
// volume code: it integrates W'' + (n - 1)/r W' = -1/(1 - W)^2, W(0) = s,
// W'(0) = 0 with RK4 and rescales, so that w(x) = W(sqrt(lambda) |x|) solves
// the problem on the ball (or interval) of radius R with lambda = r0(s)^2 / R^2.
namespace mems::oracle {

struct ShootingOptions {
  double dr = 1e-4;
};

struct Shot {
  double s = 0.0;            // W(0)
  double r0 = 0.0;           // first zero of W
  double lambda = 0.0;       // r0^2 / R^2
  double capacitance = 0.0;  // int over the physical domain of 1/(1 - w)
};

/// Integrates from W(0) = s to the first zero. `dim` = 1 is the interval.
Shot shoot(double s, int dim, double radius, const ShootingOptions& opts = {});

struct ShootingFold {
  double lambda_star = 0.0;
  double s_star = 0.0;
};

/// max over s of lambda(s) by golden-section search.
ShootingFold shooting_pull_in(int dim, double radius, const ShootingOptions& opts = {});

/// Lower-branch shot with lambda(s) = lambda; requires lambda < lambda*.
Shot shooting_minimal(double lambda, int dim, double radius, const ShootingOptions& opts = {});

/// Profile w(r) = W(sqrt(lambda) r) of a lower-branch shot at the radii given
/// (|x| for the interval); zero outside the domain.
std::vector<double> shooting_profile(const Shot& shot, int dim, double radius, const std::vector<double>& r,
                                     const ShootingOptions& opts = {});

/// Root of mu (1 + chi C(mu))^2 = lambda with C from the shooting profiles.
double shooting_nonlocal_root(double chi, double lambda, int dim, double radius, const ShootingOptions& opts = {});

}  // namespace mems::oracle
