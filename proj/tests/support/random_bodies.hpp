#pragma once

// Deterministic random bodies and ellipses for property tests.

#include <cstdint>
#include <random>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie::fixtures {

using Rng = std::mt19937_64;

// Implicit quartic near the unit disk, redrawn until convex.
ConvexBody random_smooth_body(Rng& rng, double spread = 1.0);

// Convex hull of m random points and their antipodes.
ConvexBody random_polygon_body(Rng& rng, int m);

// Random (t, phi) with |t| <= t_max and the given area.
CenteredEllipse random_ellipse(Rng& rng, double area, double t_max = 1.0);

double uniform(Rng& rng, double lo, double hi);

}  // namespace mie::fixtures
