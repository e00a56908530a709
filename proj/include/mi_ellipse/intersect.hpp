#pragma once

#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie {

enum class Parity { Enter, Exit };

// One transverse intersection of the body boundary with the circle, in the
// frame where the ellipse is the unit disk.
struct Crossing {
  double xi = 0.0;      // position on the circle, radians in [0, 2 pi)
  Parity parity = Parity::Enter;
  double alpha = 0.0;   // non-oriented crossing angle in (0, pi/2)
  double slope = 0.0;   // G'(xi)
  bool tangency = false;
  double theta = 0.0;   // polar angle of the crossing point in the original frame
};

enum class Containment { None, BodyInsideEllipse, EllipseInsideBody, Coincident };

struct CrossingSet {
  // Cyclic order; crossings[0] is the enter-crossing with the smallest xi >= 0,
  // so enters sit at even vector positions (odd 1-based indices).
  std::vector<Crossing> crossings;
  int n = 0;  // crossings.size() == 4 n
  // Touching points with no sign change (quadratic tangencies), radians.
  std::vector<double> touchings;
  Containment containment = Containment::None;
  DiskFrame frame;

  bool transverse() const;
  bool empty() const { return crossings.empty(); }

  // Build a set directly from positions on [0, pi) (mirrored by +pi) with
  // alternating parities starting with `first`. Used for synthetic inputs.
  static CrossingSet from_half_turn(std::vector<double> xi, std::vector<double> alpha,
                                    Parity first = Parity::Enter);

  // Crossing set of the body rotated by phi (every xi shifted by +phi).
  CrossingSet rotated(double phi) const;
};

inline constexpr int kRootScanIntervals = 4096;
inline constexpr int kBisectionIterations = 80;
inline constexpr double kTangencySlope = 1e-4;

// Crossings of the body boundary with the ellipse boundary.
// Errors: UnresolvedRoot.
CrossingSet find_crossings(const ConvexBody& body, const CenteredEllipse& ellipse,
                           double tol = 1e-10);

// Crossings with the unit circle of a body already in the disk frame.
CrossingSet find_unit_crossings(const ConvexBody& body, double tol = 1e-10);

// area(K ∩ E).
double intersection_area(const ConvexBody& body, const CenteredEllipse& ellipse);

// area(K ∩ D) for the unit disk D.
double unit_disk_intersection(const ConvexBody& body);

// d_sym(K, E) = area K + area E - 2 area(K ∩ E).
double symdiff_distance(const ConvexBody& body, const CenteredEllipse& ellipse);

// ½ ∫ |G - rho| over a full turn, computed directly.
double symdiff_direct(const ConvexBody& body, const CenteredEllipse& ellipse);

struct ProfileSample {
  double t = 0.0;
  double area = 0.0;
};

// Samples of the intersection function I_K(t) = area(E_t ∩ K).
std::vector<ProfileSample> intersection_profile(const ConvexBody& body, double t_min,
                                                double t_max, int steps);

}  // namespace mie
