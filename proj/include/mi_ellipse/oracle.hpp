#pragma once

// Brute-force references. Nothing here calls the crossing finder or the
// adaptive quadrature, so agreement with the analytic paths is evidence.

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie {

enum class OracleMethod { Mc, Clip, Fd, Grid };

std::string_view to_string(OracleMethod m) noexcept;

struct OracleEstimate {
  double value = 0.0;
  double sigma = 0.0;  // standard error; 0 for deterministic oracles
  OracleMethod method = OracleMethod::Mc;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

struct Box {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

// A membership test for hit-or-miss sampling, evaluated in blocks.
class McRegion {
 public:
  // {x : x^T Q x <= 1}
  static McRegion ellipse(const CenteredEllipse& e);
  // Exact membership for polygon and implicit bodies; radial-sampled bodies
  // fall back to r^2 <= G(theta).
  static McRegion body(const ConvexBody& body);
  static McRegion predicate(std::function<bool(double, double)> inside);

  // mask_i &= [point i inside]
  void apply(std::span<const double> x, std::span<const double> y,
             std::span<std::uint8_t> mask) const;

  Box bounds() const { return bounds_; }

 private:
  enum class Kind { Quadric, Halfplanes, Quartic, Predicate } kind_ = Kind::Predicate;
  Mat2 form_ = Mat2::Identity();
  Mat2 to_source_ = Mat2::Identity();
  std::vector<double> nx_, ny_, h_;
  std::array<double, 8> coeffs_{};
  double r2max_ = 0.0;
  std::function<bool(double, double)> inside_;
  Box bounds_;
};

// splitmix64 of a counter: the i-th output of the stream for `seed`.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t i);

// Hit-or-miss area of the intersection of the regions inside the box.
// Errors: InvalidInput for fewer than 1e4 samples.
OracleEstimate mc_area(std::span<const McRegion> regions, const Box& box, std::uint64_t samples,
                       std::uint64_t seed);

// area(K ∩ E) by sampling the smaller of the two bounding boxes.
OracleEstimate mc_intersection_area(const ConvexBody& body, const CenteredEllipse& e,
                                    std::uint64_t samples, std::uint64_t seed);

using Polygon = std::vector<Vec2>;

// Counterclockwise polygon approximations. Polygon bodies return their
// vertices; implicit bodies are traced by bisection on the polynomial along
// n rays; ellipses are inscribed n-gons.
Polygon polygon_of(const ConvexBody& body, int n = 4096);
Polygon polygon_of(const CenteredEllipse& e, int n = 4096);

double polygon_area(const Polygon& p);

// Sutherland-Hodgman intersection of convex polygons.
Polygon clip(const Polygon& subject, const Polygon& clipper);
OracleEstimate clip_area(const Polygon& a, const Polygon& b);

// Area of A ∩ B for polygons star-shaped about the origin, by an angular
// sweep over the merged vertex directions (exact up to rounding, linear time).
double star_intersection_area(const Polygon& a, const Polygon& b);

// Central differences of t -> area(E_t ∩ K) at t = 0.
// Errors: InvalidInput for order other than 1 or 2, or h <= 0.
OracleEstimate fd_derivative(const ConvexBody& body, int order, double h);

struct GridSearchResult {
  OracleEstimate estimate;  // best intersection area found
  double t = 0.0, phi = 0.0;
  double a = 0.0, b = 0.0;  // (t cos 2phi, t sin 2phi)
  double coarse_cell = 0.0;  // t spacing of the coarse grid
  double refined_cell = 0.0;  // (a, b) spacing of the refined grid
  bool connected = false;  // near-optimal superlevel set is one component (both grids)
  int superlevel_count = 0;
  double threshold = 1e-4;
};

// Exhaustive search over ellipses of area lambda: a grid x grid polar grid
// of (t, phi) in [0, t_span] x [0, pi), then a grid x grid Cartesian grid in
// (a, b) around the best node. Areas come from star_intersection_area on
// `sides`-gons.
// Errors: InvalidInput for grid < 21.
GridSearchResult grid_search_mi(const ConvexBody& body, double lambda, double t_span = 2.0,
                                int grid = 41, double threshold = 1e-4, int sides = 1024);

}  // namespace mie
