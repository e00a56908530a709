#include "mi_ellipse/linalg.hpp"

#include <cmath>

namespace mie {

Mat2 rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

double wrap(double theta, double period) {
  double r = std::fmod(theta, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r == 0.0 ? 0.0 : r;
}

Mat2 exp_traceless(const Mat2& x) {
  // x^2 = -det(x) I for traceless x.
  const double delta = -x.determinant();
  const Mat2 id = Mat2::Identity();
  if (std::abs(delta) < 1e-300) return id + x;
  double c = 0.0;
  double k = 0.0;
  if (delta > 0.0) {
    const double w = std::sqrt(delta);
    c = std::cosh(w);
    k = std::sinh(w) / w;
  } else {
    const double w = std::sqrt(-delta);
    c = std::cos(w);
    k = std::sin(w) / w;
  }
  return c * id + k * x;
}

SymEigen sym_eigen(const Mat2& q) {
  const double a = q(0, 0);
  const double d = q(1, 1);
  const double b = 0.5 * (q(0, 1) + q(1, 0));
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double rad = std::hypot(half, b);
  SymEigen e;
  e.hi = mean + rad;
  // Product form keeps the small eigenvalue accurate for elongated ellipses.
  const double det = a * d - b * b;
  e.lo = e.hi > 0.0 ? det / e.hi : mean - rad;
  e.angle = rad > 0.0 ? wrap(0.5 * std::atan2(b, half), kPi) : 0.0;
  return e;
}

Mat2 spd_pow(const Mat2& q, double p) {
  const SymEigen e = sym_eigen(q);
  const Mat2 r = rotation(e.angle);
  Mat2 diag = Mat2::Zero();
  diag(0, 0) = std::pow(e.hi, p);
  diag(1, 1) = std::pow(e.lo, p);
  return r * diag * r.transpose();
}

Mat2 spd_geodesic(const Mat2& a, const Mat2& b, double f) {
  const Mat2 ah = spd_pow(a, 0.5);
  const Mat2 aih = spd_pow(a, -0.5);
  Mat2 mid = aih * b * aih;
  mid = 0.5 * (mid + mid.transpose());
  Mat2 out = ah * spd_pow(mid, f) * ah;
  return 0.5 * (out + out.transpose());
}

}  // namespace mie
