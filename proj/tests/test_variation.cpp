#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/io.hpp"
#include "mi_ellipse/oracle.hpp"
#include "mi_ellipse/variation.hpp"
#include "random_bodies.hpp"

using namespace mie;

namespace {

const double kRoot3 = std::sqrt(3.0);

CrossingSet strip_set() { return find_unit_crossings(*builtin_body("strip")); }

// 2n sorted positions on a half turn with random angles.
CrossingSet random_set(fixtures::Rng& rng, int n) {
  std::vector<double> xi, alpha;
  for (int k = 0; k < 2 * n; ++k) {
    xi.push_back(fixtures::uniform(rng, 0.0, kPi));
    alpha.push_back(fixtures::uniform(rng, 0.05, 1.5));
  }
  std::sort(xi.begin(), xi.end());
  return CrossingSet::from_half_turn(xi, alpha);
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidInput;
}

}  // namespace

TEST(Deriv1, Strip) {
  const CrossingSet cs = strip_set();
  EXPECT_NEAR(deriv1(cs), -kRoot3 / 2, 1e-9);
  const OracleEstimate fd = fd_derivative(*builtin_body("strip"), 1, 1e-4);
  EXPECT_LT(fd.value, 0.0);
  EXPECT_NEAR(fd.value, -kRoot3 / 2, 1e-5);
}

TEST(Deriv1, QuarterTurnSetVanishes) {
  const CrossingSet cs =
      CrossingSet::from_half_turn({0.2, 0.9, 0.2 + kPi / 2, 0.9 + kPi / 2}, {0.5, 0.7, 0.5, 0.7});
  EXPECT_NEAR(deriv1(cs), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(residual_d(cs)), 0.0, 1e-14);
}

TEST(Deriv1, CoincidentDiskHasNoCrossings) {
  EXPECT_EQ(code_of([] { deriv1(find_unit_crossings(*builtin_body("disk"))); }), Errc::NoCrossings);
}

TEST(Deriv2, Strip) {
  const CrossingSet cs = strip_set();
  EXPECT_NEAR(deriv2(cs), 1.0 / (2.0 * kRoot3), 1e-9);
  EXPECT_NEAR(fd_derivative(*builtin_body("strip"), 2, 1e-3).value, 1.0 / (2.0 * kRoot3), 1e-3);
}

TEST(Deriv2, QuarterTurnPiOverFourAngles) {
  // Direct evaluation: with alpha = pi/4 the cot terms are 1, and the sine
  // terms cancel for odd n (the quarter turn flips parity).
  const std::vector<double> half{0.3, 0.5 + kPi / 2 - kPi / 2 + 0.4, 0.3 + kPi / 2, 0.9 + kPi / 2};
  const CrossingSet cs = CrossingSet::from_half_turn(half, std::vector<double>(4, kPi / 4));
  double expect = 0.0;
  for (std::size_t j = 0; j < cs.crossings.size() / 2; ++j) {
    const double x = cs.crossings[j].xi;
    expect += (j % 2 == 0 ? -1.0 : 1.0) * std::sin(4 * x) + (1 + std::cos(4 * x));
  }
  EXPECT_NEAR(-deriv2(cs), expect / 4, 1e-13);
  EXPECT_GT(-deriv2(cs), 0.0);

  const CrossingSet odd = CrossingSet::from_half_turn({0.3, 0.3 + kPi / 2}, {kPi / 4, kPi / 4});
  double mean = 0.0;
  for (const Crossing& c : odd.crossings) mean += (1 + std::cos(4 * c.xi));
  mean /= static_cast<double>(odd.crossings.size());
  EXPECT_NEAR(-deriv2(odd), odd.n / 2.0 * mean, 1e-13);
}

TEST(Deriv2, DegenerateAngle) {
  const CrossingSet cs = CrossingSet::from_half_turn({0.3, 1.2}, {1e-7, 0.5});
  EXPECT_EQ(code_of([&] { deriv2(cs); }), Errc::DegenerateAngle);
}

TEST(Deriv2, TangencyRejected) {
  const CrossingSet cs = CrossingSet::from_half_turn({0.3, 1.2}, {1e-5, 0.5});
  EXPECT_EQ(code_of([&] { deriv2(cs); }), Errc::TangencyPresent);
  EXPECT_EQ(code_of([&] { deriv1(cs); }), Errc::TangencyPresent);
}

TEST(FGap, Values) {
  EXPECT_NEAR(f_gap(kPi / 2), 0.0, 1e-15);
  EXPECT_NEAR(f_gap(kPi / 3), std::sin(kPi / 3), 1e-15);
  double lo = 1e9;
  for (int i = 1; i < 100000; ++i) lo = std::min(lo, f_gap(kPi * i / 100000.0));
  EXPECT_GT(lo, -0.31);
  for (int i = 1; i < 10000; ++i) {
    const double w = kPi * i / 10000.0;
    EXPECT_GE(f_gap(w), -0.5 * std::sin(w) - 1e-15);
    if (w <= 2 * kPi / 3 && i > 1) EXPECT_LT(f_gap(w), f_gap(kPi * (i - 1) / 10000.0));
  }
  EXPECT_LT(f_gap(2.8), 0.0);
  EXPECT_EQ(code_of([] { f_gap(0.0); }), Errc::DomainError);
  EXPECT_EQ(code_of([] { f_gap(kPi); }), Errc::DomainError);
  EXPECT_NEAR(g_form(1.0, kPi / 2), std::sin(1.0), 1e-15);
}

TEST(LowerBound, StripEqualityCase) {
  const IntersectionProfile p = make_profile(strip_set());
  ASSERT_EQ(p.omega.size(), 1u);
  EXPECT_NEAR(p.omega[0], 2 * kPi / 3, 1e-12);
  EXPECT_NEAR(wrap(p.sigma[0], kTwoPi), kPi, 1e-12);
  EXPECT_NEAR(deriv2_lower_bound(p), -1.0 / (2.0 * kRoot3), 1e-9);
  EXPECT_NEAR(deriv2_lower_bound(p), -deriv2(strip_set()), 1e-9);
}

TEST(LowerBound, SinBranch) {
  IntersectionProfile p;
  p.omega = {0.5, 1.0, 1.4};
  p.sigma = {kPi / 2, kPi / 2, kPi / 2};
  EXPECT_NEAR(deriv2_lower_bound(p), std::sin(0.5) + std::sin(1.0) + std::sin(1.4), 1e-14);
}

TEST(Residual, Examples) {
  const std::complex<double> d = residual_d(strip_set());
  EXPECT_NEAR(d.real(), 0.0, 1e-12);
  EXPECT_NEAR(d.imag(), 2 * kRoot3, 1e-12);
  fixtures::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const CrossingSet cs = random_set(rng, 1);
    const auto z = [&](std::size_t j) { return std::polar(1.0, 2 * cs.crossings[j].xi); };
    EXPECT_NEAR(std::abs(residual_d(cs) - 2.0 * (z(0) - z(1))), 0.0, 1e-12);
    EXPECT_GT(std::abs(residual_d(cs)), 0.0);
  }
}

TEST(Residual, RotationFormula) {
  fixtures::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const CrossingSet cs = random_set(rng, 1 + i % 3);
    const double phi = fixtures::uniform(rng, -kPi, kPi);
    EXPECT_NEAR(deriv1(cs.rotated(phi)), deriv1_rotated(cs, phi), 1e-12);
    EXPECT_NEAR(deriv1_rotated(cs, phi), -0.25 * std::imag(std::polar(1.0, 2 * phi) * residual_d(cs)),
                1e-12);
  }
}

TEST(KeyCertificate, Examples) {
  const ConvexBody strip = *builtin_body("strip");
  const KeyCertificate s = key_certificate(strip_set(), intersection_area(strip, CenteredEllipse()),
                                           strip.area(), 0.1);
  EXPECT_TRUE(s.hypothesis_ok);
  EXPECT_TRUE(s.positive);
  EXPECT_NEAR(std::abs(s.d1), kRoot3 / 2, 1e-9);

  const ConvexBody fig1 = *builtin_body("fig1");
  const CrossingSet cs = find_unit_crossings(fig1);
  // I(0) = 2.8729 sits 0.062 below the body area, so the margin must be smaller.
  const KeyCertificate f = key_certificate(cs, intersection_area(fig1, CenteredEllipse()), fig1.area(), 0.05);
  EXPECT_TRUE(f.hypothesis_ok);
  EXPECT_NEAR(f.d1, 0.0, 1e-12);
  EXPECT_GT(-f.d2, 0.0);
  EXPECT_TRUE(f.positive);

  const KeyCertificate out = key_certificate(strip_set(), 0.05, strip.area(), 0.1);
  EXPECT_FALSE(out.hypothesis_ok);
}

TEST(Properties, ThreeFirstDerivativeExpressions) {
  fixtures::Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const CrossingSet cs = random_set(rng, 1 + i % 4);
    const double d1 = deriv1(cs);
    EXPECT_NEAR(d1, deriv1_pairs(make_profile(cs)), 1e-12);
    EXPECT_NEAR(d1, -0.25 * residual_d(cs).imag(), 1e-12);
    const IntersectionProfile p = make_profile(cs);
    double total = 0.0;
    for (double w : p.omega) {
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, kPi);
      total += w;
    }
    EXPECT_LT(total, kPi);
  }
}

TEST(Properties, BoundAndHalfArcAngleLimit) {
  fixtures::Rng rng(12);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const ConvexBody k = i % 2 ? fixtures::random_smooth_body(rng) : fixtures::random_polygon_body(rng, 5);
    const CrossingSet cs = find_crossings(k, fixtures::random_ellipse(rng, fixtures::uniform(rng, 1.5, 5.0), 0.8));
    if (!cs.transverse()) continue;
    const IntersectionProfile p = make_profile(cs);
    const double d2 = deriv2(cs);
    EXPECT_LE(deriv2_lower_bound(p), -d2 + 1e-9 * std::max(1.0, std::abs(d2)));
    for (std::size_t m = 0; m < p.omega.size(); ++m) {
      const double a = std::max(cs.crossings[2 * m].alpha, cs.crossings[2 * m + 1].alpha);
      EXPECT_LE(a, p.omega[m] / 2 + 1e-8);
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

double min_alpha(const CrossingSet& cs) {
  double a = kPi;
  for (const Crossing& c : cs.crossings) a = std::min(a, c.alpha);
  return a;
}

TEST(Properties, FiniteDifferencesOnSmoothBodies) {
  // Crossing angles bounded away from zero; below that the h = 1e-3 stencil
  // is dominated by truncation, covered by the convergence test next.
  fixtures::Rng rng(13);
  int checked = 0;
  while (checked < 50) {
    const ConvexBody k = fixtures::random_smooth_body(rng);
    const CrossingSet cs = find_unit_crossings(k);
    if (!cs.transverse() || min_alpha(cs) < 0.15) continue;
    EXPECT_NEAR(deriv1(cs), fd_derivative(k, 1, 1e-4).value, 1e-5);
    EXPECT_NEAR(deriv2(cs), fd_derivative(k, 2, 1e-3).value, 1e-3);
    ++checked;
  }
}

TEST(Properties, FiniteDifferencesConvergeNearTangency) {
  fixtures::Rng rng(13);
  int checked = 0;
  while (checked < 10) {
    const ConvexBody k = fixtures::random_smooth_body(rng);
    const CrossingSet cs = find_unit_crossings(k);
    if (!cs.transverse() || min_alpha(cs) >= 0.15 || min_alpha(cs) < 0.02) continue;
    const double d2 = deriv2(cs);
    const double e0 = std::abs(d2 - fd_derivative(k, 2, 1e-3).value);
    const double f1 = fd_derivative(k, 2, 5e-4).value, f2 = fd_derivative(k, 2, 2.5e-4).value;
    // Richardson extrapolation removes the h^2 term.
    const double e2 = std::abs(d2 - (4 * f2 - f1) / 3);
    EXPECT_LT(e2, std::max(0.1 * e0, 1e-4)) << "min alpha " << min_alpha(cs);
    ++checked;
  }
}
