#include "mi_ellipse/conic.hpp"

#include <cmath>

#include "mi_ellipse/error.hpp"

namespace mie {

CenteredEllipse::CenteredEllipse(const Mat2& form) {
  form_ = 0.5 * (form + form.transpose());
  const double det = form_.determinant();
  if (!(det > 0.0) || !(form_(0, 0) > 0.0)) {
    throw Error(Errc::InvalidInput, "ellipse form must be positive definite");
  }
  const SymEigen e = sym_eigen(form_);
  area_ = kPi / std::sqrt(det);
  t_ = 0.5 * std::log(e.hi / e.lo);
  // Below this the axes are rounding noise.
  if (t_ < 1e-13) t_ = 0.0;
  phi_ = t_ > 0.0 ? e.angle : 0.0;
}

CenteredEllipse CenteredEllipse::from_params(double t, double phi, double area) {
  if (!(area > 0.0)) throw Error(Errc::InvalidInput, "ellipse area must be positive");
  const double c = kPi / area;
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::exp(t) * c;
  d(1, 1) = std::exp(-t) * c;
  const Mat2 r = rotation(phi);
  return CenteredEllipse(r * d * r.transpose());
}

double CenteredEllipse::semi_minor() const { return 1.0 / std::sqrt(sym_eigen(form_).hi); }

double CenteredEllipse::semi_major() const { return 1.0 / std::sqrt(sym_eigen(form_).lo); }

CenteredEllipse CenteredEllipse::transformed(const Mat2& m) const {
  const Mat2 mi = m.inverse();
  return CenteredEllipse(mi.transpose() * form_ * mi);
}

CenteredEllipse CenteredEllipse::with_area(double area) const {
  if (!(area > 0.0)) throw Error(Errc::InvalidInput, "ellipse area must be positive");
  return CenteredEllipse(form_ * (area_ / area));
}

CenteredEllipse standard_ellipse(double t) {
  Mat2 q = Mat2::Zero();
  q(0, 0) = std::exp(t);
  q(1, 1) = std::exp(-t);
  return CenteredEllipse(q);
}

double ellipse_radial(const CenteredEllipse& e, double theta) {
  const Vec2 u = unit(theta);
  return 1.0 / u.dot(e.form() * u);
}

DiskFrame normalize_to_disk(const CenteredEllipse& e) {
  const SymEigen se = sym_eigen(e.form());
  const double c = std::sqrt(se.hi * se.lo);
  const double half_t = 0.25 * std::log(se.hi / se.lo);
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::exp(half_t);
  d(1, 1) = std::exp(-half_t);
  DiskFrame f;
  f.unimodular = d * rotation(se.angle).transpose();
  f.scale = std::sqrt(c);
  return f;
}

Mat2 chart_form(const Mat2& frame, double a, double b) {
  Mat2 x;
  x << a, b, b, -a;
  Mat2 q = frame.transpose() * exp_traceless(x) * frame;
  return 0.5 * (q + q.transpose());
}

}  // namespace mie
