#pragma once

#include <optional>
#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"
#include "mi_ellipse/extremal.hpp"

namespace mie {

struct MIResult {
  CenteredEllipse ellipse;
  double lambda = 0.0;
  double intersection = 0.0;
  double residual = 0.0;  // |D| at the solution; 0 when the ellipse lies inside K or contains it
  // I'' along the two chart axes at the solution (NaN when a tangency or a
  // containment leaves them undefined).
  double concavity_a = 0.0;
  double concavity_b = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct MIOptions {
  double tol = 1e-7;
  int max_iterations = 500;
  // Reused when given, recomputed otherwise.
  std::optional<ExtremalResult> john;
  std::optional<ExtremalResult> loewner;
  // Starting ellipse (any area; rescaled to lambda).
  std::optional<Mat2> warm_start;
};

// The ellipse of area lambda maximizing area(E ∩ K).
// Errors: LambdaOutOfRange, NoConvergence.
MIResult mi_ellipse(const ConvexBody& body, double lambda, const MIOptions& options);
MIResult mi_ellipse(const ConvexBody& body, double lambda, double tol = 1e-7);

struct FamilyPoint {
  double lambda = 0.0;
  MIResult result;
};

// MI ellipses for lambda uniform on [area John, area Loewner]. A single
// point when the two coincide (K is an ellipse).
std::vector<FamilyPoint> mi_family(const ConvexBody& body, int steps, double tol = 1e-7);

// Hausdorff distance between centred ellipses: max_u |h_1(u) - h_2(u)|.
double hausdorff_distance(const CenteredEllipse& a, const CenteredEllipse& b);

struct DisplacedCenterReport {
  CenteredEllipse ellipse;     // the MI ellipse
  double center_area = 0.0;    // area(K ∩ M)
  Vec2 best_offset = Vec2::Zero();
  double best_area = 0.0;      // max over offsets of area(K ∩ (M + v))
  double cell = 0.0;           // grid spacing of the offsets
  int evaluated = 0;
  bool max_at_origin = false;  // best offset within one cell of 0
};

// area(K ∩ (E + v)) by polar integration about v / 2.
// Errors: InvalidInput when v / 2 is not interior to both sets.
double shifted_intersection_area(const ConvexBody& body, const CenteredEllipse& e, const Vec2& v);

// Compare area(K ∩ (M + v)) over offsets v on a grid x grid lattice of the
// disk |v| <= max_offset.
// Errors: as mi_ellipse.
DisplacedCenterReport displaced_center_check(const ConvexBody& body, double lambda, int grid = 11,
                                             double max_offset = 0.5);

struct QuasiconcavityReport {
  std::vector<double> t;
  std::vector<double> values;
  std::vector<bool> admissible;
  // Middle indices j of triples i < j < k with I_j <= min(I_i, I_k) + tol.
  std::vector<int> violations;
  int argmax = 0;
  // Nondecreasing before the argmax and nonincreasing after, on admissible samples.
  bool unimodal = true;
  // Exploratory: indices where log I fails midpoint concavity.
  std::vector<int> log_concavity_violations;
};

// Samples I(t) = area(K ∩ E_t(frame)) along the chart line through the
// ellipse {x : x^T frame^T diag(e^t, e^-t) frame x <= 1} (frame unimodular),
// and looks for quasiconcavity failures where I < min(pi, area K) - 1e-6.
QuasiconcavityReport quasiconcavity_probe(const ConvexBody& body, const Mat2& frame,
                                          double t_min, double t_max, int steps,
                                          double tol = 1e-9);

}  // namespace mie
