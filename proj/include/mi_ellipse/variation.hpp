#pragma once

#include <complex>
#include <vector>

#include "mi_ellipse/intersect.hpp"

namespace mie {

// Pairs of consecutive crossings (enter, exit) over one half turn.
struct IntersectionProfile {
  std::vector<double> sigma;  // xi_{2i} + xi_{2i-1}
  std::vector<double> omega;  // xi_{2i} - xi_{2i-1}, each in (0, pi)
  std::complex<double> D;
};

// First derivative of t -> area(E_t ∩ K) at t = 0, K in the disk frame:
// ½ Σ_{j=1}^{2n} (-1)^j sin 2 xi_j.
// Errors: NoCrossings, TangencyPresent.
double deriv1(const CrossingSet& cs);

// Same quantity from the pair form Σ sin(omega_i) cos(sigma_i).
double deriv1_pairs(const IntersectionProfile& p);

// Signed second derivative I''(0). The bracket
// ¼ Σ [(-1)^j sin 4 xi_j + (1 + cos 4 xi_j) / tan alpha_j] is -I''(0).
// Errors: NoCrossings, TangencyPresent, DegenerateAngle (some alpha < 1e-6).
double deriv2(const CrossingSet& cs);

// Derivatives for the body rotated by phi (every xi shifted by phi).
double deriv1_rotated(const CrossingSet& cs, double phi);
double deriv2_rotated(const CrossingSet& cs, double phi);

// Errors: NoCrossings, TangencyPresent.
IntersectionProfile make_profile(const CrossingSet& cs);

// f(w) = cot(w/2) - sin w and g(w, s) = sin w sin^2 s + f(w) cos^2 s.
// Errors: DomainError for w outside (0, pi).
double f_gap(double omega);
double g_form(double omega, double sigma);

// Σ g(omega_i, sigma_i); never exceeds -I''(0).
double deriv2_lower_bound(const IntersectionProfile& p);

// Σ_odd ζ_j^2 - Σ_even ζ_j^2 over all 4n crossings, ζ_j = exp(i xi_j).
// Errors: NoCrossings, TangencyPresent.
std::complex<double> residual_d(const CrossingSet& cs);

struct KeyCertificate {
  double d1 = 0.0;
  double d2 = 0.0;
  double bound = 0.0;
  bool hypothesis_ok = false;
  bool positive = false;
};

// `area` is area(K ∩ D) and `body_area` the area of K, both in the disk frame.
// Errors: NoCrossings, TangencyPresent.
KeyCertificate key_certificate(const CrossingSet& cs, double area, double body_area, double eps);

}  // namespace mie
