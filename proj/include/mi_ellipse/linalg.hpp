#pragma once

#include <Eigen/Dense>

#include <numbers>

namespace mie {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

Mat2 rotation(double phi);

// Reduce an angle into [0, period).
double wrap(double theta, double period);

// Exponential of a traceless 2x2 matrix (closed form; det of result is 1).
Mat2 exp_traceless(const Mat2& x);

struct SymEigen {
  double hi = 0.0;     // larger eigenvalue
  double lo = 0.0;     // smaller eigenvalue
  double angle = 0.0;  // direction of the `hi` eigenvector, in [0, pi)
};

// Closed-form eigen-decomposition of a symmetric 2x2 matrix.
SymEigen sym_eigen(const Mat2& q);

// Q^p for symmetric positive definite Q.
Mat2 spd_pow(const Mat2& q, double p);

// Geodesic interpolation a^{1/2} (a^{-1/2} b a^{-1/2})^f a^{1/2} between SPD matrices.
Mat2 spd_geodesic(const Mat2& a, const Mat2& b, double f);

}  // namespace mie
