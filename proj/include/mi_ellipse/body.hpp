#pragma once

// Centrally symmetric planar convex bodies seen through their squared radial
// function G(theta) = r(theta)^2, which is pi-periodic.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mi_ellipse/linalg.hpp"

namespace mie {

// p(x, y) = x2 x^2 + xy x y + y2 y^2 + x4 x^4 + x3y x^3 y + x2y2 x^2 y^2 + xy3 x y^3 + y4 y^4.
// Only even-degree terms, so p(-x, -y) = p(x, y) by construction.
struct EvenQuartic {
  double x2 = 0.0, xy = 0.0, y2 = 0.0;
  double x4 = 0.0, x3y = 0.0, x2y2 = 0.0, xy3 = 0.0, y4 = 0.0;

  double quadratic(double x, double y) const { return x2 * x * x + xy * x * y + y2 * y * y; }
  double quartic(double x, double y) const {
    const double xx = x * x, yy = y * y, xyv = x * y;
    return x4 * xx * xx + x3y * xx * xyv + x2y2 * xx * yy + xy3 * xyv * yy + y4 * yy * yy;
  }
  double operator()(double x, double y) const { return quadratic(x, y) + quartic(x, y); }

  std::array<double, 8> coefficients() const { return {x2, xy, y2, x4, x3y, x2y2, xy3, y4}; }
};

class ConvexBody {
 public:
  enum class Kind { Polygon, Implicit, Radial };

  static constexpr int kDefaultGrid = 2048;

  Kind kind() const;

  // Squared radius G(theta) of the boundary in direction theta.
  double radial(double theta) const;
  Vec2 boundary_point(double theta) const;

  double area() const { return area_; }

  // The body is frame() applied to its source description.
  const Mat2& frame() const { return frame_; }
  const Mat2& inverse_frame() const { return inverse_frame_; }

  // Source data; each throws InvalidInput for the wrong kind.
  std::span<const Vec2> source_vertices() const;
  const EvenQuartic& source_polynomial() const;
  std::span<const double> source_samples() const;

  // Polygon vertices after the frame map (counterclockwise).
  std::vector<Vec2> vertices() const;

  // G sampled at k*pi/N, k = 0..N-1.
  std::span<const double> grid() const { return grid_; }
  double max_radius() const;
  double min_radius() const;

  // Angles in [0, pi) where G is not smooth (polygon vertices, sample nodes).
  std::vector<double> kinks() const;

  // Image under x -> m x, with det m > 0. Convexity and symmetry are preserved,
  // so no validation is repeated.
  ConvexBody linear_image(const Mat2& m) const;
  // Same, with a coarser or finer cached grid.
  ConvexBody linear_image(const Mat2& m, int grid_size) const;

  struct Source;

 private:
  ConvexBody(std::shared_ptr<const Source> src, const Mat2& frame, int grid_size);

  friend ConvexBody body_from_polygon(std::vector<Vec2> vertices, double tol);
  friend ConvexBody body_from_implicit(const EvenQuartic& p, int resolution);
  friend ConvexBody body_from_radial_samples(std::vector<double> samples, int resolution);

  std::shared_ptr<const Source> src_;
  Mat2 frame_;
  Mat2 inverse_frame_;
  double area_ = 0.0;
  std::vector<double> grid_;
};

// Vertices counterclockwise with v[k + m] = -v[k] (2m vertices), convex.
// Errors: TooFewVertices, NotCentrallySymmetric, NotConvex.
ConvexBody body_from_polygon(std::vector<Vec2> vertices, double tol = 1e-9);

// Body {p <= 1}, the component containing the origin. The radial root is the
// smallest positive s = r^2 with p(sqrt(s) u) = 1.
// Errors: RayRootNotFound, NotConvex.
ConvexBody body_from_implicit(const EvenQuartic& p, int resolution = ConvexBody::kDefaultGrid);

// Uniform samples of G on [0, pi), interpolated by a periodic monotone cubic.
// Errors: InvalidInput, NotConvex.
ConvexBody body_from_radial_samples(std::vector<double> samples,
                                    int resolution = ConvexBody::kDefaultGrid);

inline double radial(const ConvexBody& body, double theta) { return body.radial(theta); }
inline double body_area(const ConvexBody& body) { return body.area(); }

// Errors: NotUnimodular when |det L - 1| > 1e-12.
ConvexBody apply_unimodular(const ConvexBody& body, const Mat2& l);

// Pseudorandom unimodular map exp(X), X traceless with entries in
// [-magnitude, magnitude]; deterministic per seed. Returns the map and the image.
Mat2 general_position_map(double magnitude, std::uint64_t seed);
ConvexBody perturb_general_position(const ConvexBody& body, double magnitude, std::uint64_t seed);

// Support-line test: the most negative value of h(n_i) - <p_j, n_i> over
// `samples` boundary points per half-turn (and their antipodes), with n_i the
// outward unit normal at p_i. Nonnegative (up to rounding) for convex bodies.
double convexity_slack(const ConvexBody& body, int samples = 360);

// ½ ∫ G over a full turn by adaptive quadrature split at the kinks.
double radial_area(const ConvexBody& body);

// Shoelace area of a polygon.
double shoelace_area(std::span<const Vec2> vertices);

}  // namespace mie
