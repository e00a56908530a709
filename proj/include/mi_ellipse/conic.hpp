#pragma once

#include "mi_ellipse/linalg.hpp"

namespace mie {

// Origin-centred ellipse {x : x^T Q x <= 1}, with
// Q = R_phi diag(e^t pi/area, e^{-t} pi/area) R_phi^T.
// Canonical chart: t >= 0, phi in [0, pi), phi = 0 when t = 0.
class CenteredEllipse {
 public:
  CenteredEllipse() : CenteredEllipse(Mat2::Identity()) {}

  // Q must be symmetric positive definite.
  explicit CenteredEllipse(const Mat2& form);

  // Any real t is accepted; (t, phi) and (-t, phi + pi/2) name the same ellipse.
  static CenteredEllipse from_params(double t, double phi, double area);

  double t() const { return t_; }
  double phi() const { return phi_; }
  double area() const { return area_; }
  const Mat2& form() const { return form_; }

  // Semi-axis lengths, short first.
  double semi_minor() const;
  double semi_major() const;

  // Image under x -> m x.
  CenteredEllipse transformed(const Mat2& m) const;

  // Same shape, rescaled to the given area.
  CenteredEllipse with_area(double area) const;

  bool contains(const Vec2& p) const { return p.dot(form_ * p) <= 1.0; }

 private:
  Mat2 form_;
  double t_ = 0.0;
  double phi_ = 0.0;
  double area_ = 0.0;
};

// E_t = {e^t x^2 + e^{-t} y^2 <= 1}, area pi.
CenteredEllipse standard_ellipse(double t);

// Squared radius of the ellipse boundary in direction theta: 1 / (u^T Q u).
double ellipse_radial(const CenteredEllipse& e, double theta);

// s * L maps the ellipse onto the unit disk, det L = 1, s > 0.
struct DiskFrame {
  Mat2 unimodular;
  double scale = 1.0;

  Mat2 map() const { return scale * unimodular; }
};

DiskFrame normalize_to_disk(const CenteredEllipse& e);

// Ellipse {x : x^T M^T exp(X) M x <= 1} for the traceless symmetric
// X = [[a, b], [b, -a]]: the chart used by the solver around an ellipse whose
// disk frame is M.
Mat2 chart_form(const Mat2& frame, double a, double b);

}  // namespace mie
