#pragma once

#include <complex>
#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/intersect.hpp"

namespace mie {

struct PositionReport {
  bool is_mi = false;
  double residual = 0.0;  // |D|
  CrossingSet crossings;
  // Filled when there are exactly 8 crossings.
  bool quarter_turn_checked = false;
  bool quarter_turn_invariant = false;
  double quarter_turn_error = 0.0;
};

// Is the unit disk an MI ellipse of K? Needs a transverse boundary.
// Errors: TangencyPresent, NoCrossings.
PositionReport check_mi_position(const ConvexBody& body, double tol = 1e-6);

// Largest distance from a rotated crossing to the nearest crossing of the
// same parity, for the rotation by phi.
double rotation_invariance_error(const CrossingSet& cs, double phi);

struct IsotropicMeasure {
  std::vector<Vec2> support;
  std::vector<double> weights;
  double balance_residual = 0.0;   // |Σ p_j ζ_j|
  double isotropy_residual = 0.0;  // max over test directions of |Σ p_j <ζ_j, v>^2 - ½|v|^2|
};

// Residuals of an arbitrary weighted point set on the circle.
void measure_residuals(IsotropicMeasure& m);

// Balanced isotropic probability measure on the crossing points.
// Errors: NotStationary (|D| > tol or fewer than 8 crossings), InfeasibleHull.
IsotropicMeasure isotropic_weights(const CrossingSet& cs, double tol = 1e-6);

struct ConverseReport {
  double eps = 0.0;
  CrossingSet crossings;
  std::complex<double> odd_sum;   // Σ_{j odd} ζ_j^2
  std::complex<double> even_sum;  // Σ_{j even} ζ_j^2
  std::complex<double> D;
  IsotropicMeasure uniform;
  bool isotropic = false;
  bool stationary = false;
};

// The twelve points exp(i(k pi/2 + s)), s in {-eps, 0, eps}: the uniform
// measure on them is balanced and isotropic while D = 4 - 8 cos 2 eps.
ConverseReport converse_counterexample_check(double eps = 0.3);

}  // namespace mie
