#pragma once

#include <span>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie {

enum class ExtremalKind { John, Loewner };

struct ExtremalResult {
  CenteredEllipse ellipse;
  ExtremalKind kind = ExtremalKind::Loewner;
  // Complementarity residual max_i p_i^T M^{-1} p_i / 2 - 1 of the final
  // minimum-volume solve.
  double optimality_gap = 0.0;
  int iterations = 0;
};

struct MveeResult {
  Mat2 form;  // {x : x^T form x <= 1} contains every point
  double gap = 0.0;
  int iterations = 0;
  std::vector<double> weights;
};

// Minimum-area origin-centred ellipse containing +-points (Khachiyan's
// multiplicative scheme with Todd-Yildirim away steps).
// Errors: InvalidInput (points span less than the plane), IterationLimit.
MveeResult mvee(std::span<const Vec2> points, double tol = 1e-9, int max_iterations = 200000);

// Minimal circumscribed centred ellipse.
// Errors: IterationLimit.
ExtremalResult loewner_ellipse(const ConvexBody& body, double tol = 1e-7);

// Maximal inscribed centred ellipse, via the polar body.
// Errors: IterationLimit.
ExtremalResult john_ellipse(const ConvexBody& body, double tol = 1e-7);

// Support function h_K(u) for the unit vector u at angle theta.
double support(const ConvexBody& body, double theta);

// min / max over the boundary of G(theta) u^T Q u; K ⊆ E iff max <= 1 and
// E ⊆ K iff min >= 1.
double containment_ratio_max(const ConvexBody& body, const CenteredEllipse& e, int grid = 2880);
double containment_ratio_min(const ConvexBody& body, const CenteredEllipse& e, int grid = 2880);

}  // namespace mie
