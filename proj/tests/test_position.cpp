#include <gtest/gtest.h>

#include <cmath>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/extremal.hpp"
#include "mi_ellipse/io.hpp"
#include "mi_ellipse/position.hpp"
#include "mi_ellipse/solver.hpp"
#include "random_bodies.hpp"

using namespace mie;

namespace {

ConvexBody body(const char* name) { return *builtin_body(name); }

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InvalidInput;
}

void expect_measure(const IsotropicMeasure& m, double tol) {
  double total = 0.0;
  for (double p : m.weights) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_LE(m.balance_residual, tol);
  EXPECT_LE(m.isotropy_residual, tol);
  // Direct check on 16 directions, independent of the stored residuals.
  for (int k = 0; k < 16; ++k) {
    const Vec2 v(std::cos(kPi * k / 16), std::sin(kPi * k / 16));
    double s = 0.0;
    Vec2 c = Vec2::Zero();
    for (std::size_t j = 0; j < m.support.size(); ++j) {
      s += m.weights[j] * std::pow(m.support[j].dot(v), 2);
      c += m.weights[j] * m.support[j];
    }
    EXPECT_NEAR(s, 0.5, tol);
    EXPECT_LE(c.norm(), tol);
  }
}

}  // namespace

TEST(CheckPosition, Fig1IsMi) {
  const PositionReport r = check_mi_position(body("fig1"));
  EXPECT_TRUE(r.is_mi);
  EXPECT_LT(r.residual, 1e-4);
  EXPECT_EQ(r.crossings.crossings.size(), 8u);
  EXPECT_TRUE(r.quarter_turn_checked);
  EXPECT_TRUE(r.quarter_turn_invariant);
  EXPECT_LT(r.quarter_turn_error, 1e-4);
}

TEST(CheckPosition, StripIsNot) {
  const PositionReport r = check_mi_position(body("strip"));
  EXPECT_FALSE(r.is_mi);
  EXPECT_NEAR(r.residual, 2 * std::sqrt(3.0), 1e-9);
  EXPECT_FALSE(r.quarter_turn_checked);
}

TEST(CheckPosition, ThinRhombusHasFourCrossings) {
  const ConvexBody k = body_from_polygon({{1.5, 0.0}, {0.0, 0.3}, {-1.5, 0.0}, {0.0, -0.3}});
  const PositionReport r = check_mi_position(k);
  EXPECT_EQ(r.crossings.crossings.size(), 4u);
  EXPECT_FALSE(r.is_mi);
  EXPECT_GT(r.residual, 0.0);
}

TEST(CheckPosition, Errors) {
  EXPECT_EQ(code_of([] { check_mi_position(body("disk")); }), Errc::NoCrossings);
  // The square touches the circle at its edge midpoints.
  EXPECT_EQ(code_of([] { check_mi_position(body("square")); }), Errc::TangencyPresent);
}

TEST(RotationInvariance, QuarterTurnOfFig1) {
  const CrossingSet cs = find_unit_crossings(body("fig1"));
  EXPECT_LT(rotation_invariance_error(cs, kPi / 2), 1e-6);
  EXPECT_GT(rotation_invariance_error(cs, 0.3), 1e-3);
  EXPECT_NEAR(rotation_invariance_error(cs, kPi), 0.0, 1e-12);
}

TEST(Isotropic, QuarterTurnEightPointsUniform) {
  const CrossingSet cs = CrossingSet::from_half_turn({0.2, 0.7, 0.2 + kPi / 2, 0.7 + kPi / 2}, {0.5, 0.5, 0.5, 0.5});
  const IsotropicMeasure m = isotropic_weights(cs);
  ASSERT_EQ(m.weights.size(), 8u);
  expect_measure(m, 1e-12);
  IsotropicMeasure uniform;
  for (const Crossing& c : cs.crossings) uniform.support.emplace_back(std::cos(c.xi), std::sin(c.xi));
  uniform.weights.assign(8, 1.0 / 8);
  measure_residuals(uniform);
  EXPECT_LE(uniform.balance_residual, 1e-15);
  EXPECT_LE(uniform.isotropy_residual, 1e-15);
}

TEST(Isotropic, Fig1Crossings) {
  const IsotropicMeasure m = isotropic_weights(find_unit_crossings(body("fig1")));
  expect_measure(m, 1e-9);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(m.weights[j], m.weights[j + 4], 1e-15);
}

TEST(Isotropic, Errors) {
  EXPECT_EQ(code_of([] { isotropic_weights(find_unit_crossings(body("strip"))); }), Errc::NotStationary);
}

TEST(Converse, TwelvePointSet) {
  const double eps = 0.3;
  const ConverseReport r = converse_counterexample_check(eps);
  EXPECT_EQ(r.crossings.crossings.size(), 12u);
  EXPECT_TRUE(r.isotropic);
  EXPECT_FALSE(r.stationary);
  EXPECT_LE(r.uniform.balance_residual, 1e-12);
  EXPECT_LE(r.uniform.isotropy_residual, 1e-12);
  const double p = 2 - 4 * std::cos(2 * eps);
  EXPECT_NEAR(r.odd_sum.real(), p, 1e-12);
  EXPECT_NEAR(r.even_sum.real(), -p, 1e-12);
  EXPECT_NEAR(r.odd_sum.imag(), 0.0, 1e-12);
  EXPECT_NEAR(r.even_sum.imag(), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.D), std::abs(4 - 8 * std::cos(2 * eps)), 1e-12);

  const ConverseReport excluded = converse_counterexample_check(kPi / 6);
  EXPECT_NEAR(std::abs(excluded.D), 0.0, 1e-12);
  const ConverseReport small = converse_counterexample_check(0.1);
  EXPECT_TRUE(small.isotropic);
  EXPECT_GT(std::abs(small.D), 1.0);
}

TEST(Properties, RotationLeavesResidualUnchanged) {
  const ConvexBody k = body("fig1");
  fixtures::Rng rng(51);
  for (int n = 0; n < 10; ++n) {
    const double a = fixtures::uniform(rng, 0, kTwoPi);
    const PositionReport r = check_mi_position(apply_unimodular(k, rotation(a)));
    EXPECT_TRUE(r.is_mi);
    EXPECT_NEAR(r.residual, check_mi_position(k).residual, 1e-8);
  }
  const ConvexBody s = body("strip");
  for (int n = 0; n < 10; ++n) {
    const PositionReport r = check_mi_position(apply_unimodular(s, rotation(fixtures::uniform(rng, 0, kTwoPi))));
    EXPECT_FALSE(r.is_mi);
    EXPECT_NEAR(r.residual, 2 * std::sqrt(3.0), 1e-8);
  }
}

TEST(Properties, FourCrossingsNeverStationary) {
  fixtures::Rng rng(52);
  int checked = 0;
  while (checked < 50) {
    const double a = fixtures::uniform(rng, 1.2, 3.0), b = fixtures::uniform(rng, 0.1, 0.8);
    const ConvexBody k = apply_unimodular(body_from_polygon({{a, 0.0}, {0.0, b}, {-a, 0.0}, {0.0, -b}}),
                                          rotation(fixtures::uniform(rng, 0, kPi)));
    const CrossingSet cs = find_unit_crossings(k);
    if (cs.crossings.size() != 4 || !cs.transverse()) continue;
    const std::complex<double> z1 = std::polar(1.0, 2 * cs.crossings[0].xi);
    const std::complex<double> z2 = std::polar(1.0, 2 * cs.crossings[1].xi);
    const PositionReport r = check_mi_position(k);
    EXPECT_FALSE(r.is_mi);
    EXPECT_GE(r.residual, std::abs(z1 - z2) - 1e-12);
    EXPECT_GT(std::abs(z1 - z2), 0.0);
    ++checked;
  }
}

TEST(Properties, SolverOutputsAreIsotropic) {
  // Map each body so that its MI ellipse becomes the unit disk.
  fixtures::Rng rng(53);
  int checked = 0;
  for (int n = 0; n < 20 && checked < 6; ++n) {
    const ConvexBody k = n % 2 ? fixtures::random_smooth_body(rng) : fixtures::random_polygon_body(rng, 5);
    const double lambda =
        0.5 * (john_ellipse(k).ellipse.area() + loewner_ellipse(k).ellipse.area());
    const MIResult r = mi_ellipse(k, lambda);
    const ConvexBody moved = k.linear_image(normalize_to_disk(r.ellipse).map());
    const CrossingSet cs = find_unit_crossings(moved);
    if (cs.crossings.size() < 8 || !cs.transverse()) continue;
    const PositionReport p = check_mi_position(moved);
    EXPECT_TRUE(p.is_mi) << n << " residual " << p.residual;
    expect_measure(isotropic_weights(cs), 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 3);
}
