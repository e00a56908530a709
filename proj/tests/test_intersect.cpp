#include <gtest/gtest.h>

#include <cmath>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/io.hpp"
#include "mi_ellipse/oracle.hpp"
#include "random_bodies.hpp"

using namespace mie;

namespace {

ConvexBody body(const char* name) { return *builtin_body(name); }

// I(t) for the unit disk against E_t: 4 arctan(e^{-|t|/2}).
double disk_profile(double t) { return 4.0 * std::atan(std::exp(-std::abs(t) / 2)); }

void expect_structure(const CrossingSet& cs) {
  const std::size_t m = cs.crossings.size();
  ASSERT_EQ(m % 4, 0u);
  ASSERT_EQ(static_cast<int>(m), 4 * cs.n);
  for (std::size_t j = 0; j < m; ++j) {
    const Crossing& c = cs.crossings[j];
    const Crossing& d = cs.crossings[(j + 1) % m];
    EXPECT_NE(c.parity, d.parity);
    EXPECT_EQ(c.parity, j % 2 == 0 ? Parity::Enter : Parity::Exit);
    // (-1)^j G'(xi_j) > 0 with 1-based j.
    EXPECT_GT((j % 2 == 0 ? -1.0 : 1.0) * c.slope, 0.0);
    const Crossing& anti = cs.crossings[(j + m / 2) % m];
    EXPECT_EQ(anti.parity, c.parity);
    EXPECT_NEAR(wrap(anti.xi - c.xi, kTwoPi), kPi, 1e-12);
    EXPECT_GT(c.alpha, 0.0);
    EXPECT_LT(c.alpha, kPi / 2);
  }
}

}  // namespace

TEST(Crossings, StripAgainstUnitDisk) {
  const CrossingSet cs = find_unit_crossings(body("strip"));
  ASSERT_EQ(cs.crossings.size(), 4u);
  const double expect[] = {kPi / 6, 5 * kPi / 6, 7 * kPi / 6, 11 * kPi / 6};
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(cs.crossings[static_cast<std::size_t>(j)].xi, expect[j], 1e-12);
    EXPECT_NEAR(cs.crossings[static_cast<std::size_t>(j)].alpha, kPi / 3, 1e-8);
  }
  EXPECT_EQ(cs.crossings[0].parity, Parity::Enter);
  EXPECT_EQ(cs.crossings[2].parity, Parity::Enter);
  expect_structure(cs);
  EXPECT_TRUE(cs.transverse());
}

TEST(Crossings, Fig1QuarterTurn) {
  const CrossingSet cs = find_unit_crossings(body("fig1"));
  ASSERT_EQ(cs.crossings.size(), 8u);
  expect_structure(cs);
  for (std::size_t j = 0; j < 8; ++j) {
    const double moved = wrap(cs.crossings[j].xi + kPi / 2, kTwoPi);
    double best = 10.0;
    for (const Crossing& c : cs.crossings) {
      const double d = std::abs(wrap(c.xi - moved + kPi, kTwoPi) - kPi);
      best = std::min(best, d);
    }
    EXPECT_LT(best, 1e-6);
  }
}

TEST(Crossings, SmallDiskIsContained) {
  const ConvexBody k = body_from_implicit(EvenQuartic{1 / 0.81, 0.0, 1 / 0.81});
  const CrossingSet cs = find_unit_crossings(k);
  EXPECT_TRUE(cs.empty());
  EXPECT_EQ(cs.containment, Containment::BodyInsideEllipse);
  const CrossingSet big = find_unit_crossings(body("square"));
  EXPECT_EQ(big.containment, Containment::EllipseInsideBody);
}

TEST(Crossings, CoincidentDisk) {
  const CrossingSet cs = find_unit_crossings(body("disk"));
  EXPECT_EQ(cs.containment, Containment::Coincident);
}

TEST(Crossings, ArcContactIsUnresolved) {
  // A body that follows the unit circle on an arc and leaves it elsewhere.
  std::vector<double> g(256);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double th = kPi * static_cast<double>(i) / 256.0;
    g[i] = th < 1.0 ? 1.0 : 1.0 + 0.2 * std::pow(std::sin(kPi * (th - 1.0) / (kPi - 1.0)), 2);
  }
  try {
    find_unit_crossings(body_from_radial_samples(g));
    FAIL() << "expected UnresolvedRoot";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnresolvedRoot);
  }
}

TEST(Crossings, EllipseFrameAndOriginalAngles) {
  const CenteredEllipse e = CenteredEllipse::from_params(0.5, 0.3, 2.5);
  const ConvexBody k = body("fig1");
  const CrossingSet cs = find_crossings(k, e);
  ASSERT_FALSE(cs.empty());
  expect_structure(cs);
  for (const Crossing& c : cs.crossings) {
    // theta is the crossing direction in the original plane: both boundaries pass there.
    EXPECT_NEAR(k.radial(c.theta), ellipse_radial(e, c.theta), 1e-9);
  }
}

TEST(Crossings, GeneralPositionSquareIsTransverse) {
  // The square touches the unit circle at four edge midpoints; a small
  // unimodular perturbation breaks every one of those tangencies.
  EXPECT_EQ(find_unit_crossings(body("square")).touchings.size(), 2u);
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CrossingSet cs = find_unit_crossings(perturb_general_position(body("square"), 0.01, seed));
    if (cs.touchings.empty() && (cs.empty() || cs.transverse())) ++clean;
  }
  EXPECT_EQ(clean, 20);
}

TEST(Area, Examples) {
  EXPECT_NEAR(intersection_area(body("disk"), CenteredEllipse()), kPi, 1e-12);
  const double b = 0.5;
  const double slab = 2.0 * (b * std::sqrt(1 - b * b) + std::asin(b));
  EXPECT_NEAR(intersection_area(body("strip"), CenteredEllipse()), slab, 1e-12);
  EXPECT_NEAR(slab, 1.9132229549810362, 1e-15);
  // Monte Carlo, 1e7 samples, seed 7: 2.18074 ± 2.3e-4.
  const double i1 = intersection_area(body("disk"), standard_ellipse(1.0));
  EXPECT_NEAR(i1, 2.18074, 3 * 2.34e-4);
  EXPECT_NEAR(i1, disk_profile(1.0), 1e-12);
}

TEST(Area, SymmetricDifference) {
  const ConvexBody sq = body("square");
  EXPECT_NEAR(symdiff_distance(sq, CenteredEllipse()), 4.0 - kPi, 1e-12);
  EXPECT_NEAR(symdiff_distance(body("strip"), CenteredEllipse()), 20.0 + kPi - 2 * 1.9132229549810362,
              1e-11);
  EXPECT_NEAR(symdiff_distance(body("disk"), CenteredEllipse()), 0.0, 1e-12);
}

TEST(Profile, DiskIsEvenAndFig1PeaksAtZero) {
  const auto d = intersection_profile(body("disk"), -1.0, 1.0, 3);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_NEAR(d[0].area, d[2].area, 1e-12);
  const auto sq = intersection_profile(body("square"), -1.5, 1.5, 31);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    EXPECT_NEAR(sq[i].area, sq[sq.size() - 1 - i].area, 1e-11);
    EXPECT_FALSE(std::isnan(sq[i].area));
  }
  const auto f = intersection_profile(body("fig1"), -0.5, 0.5, 41);
  std::size_t best = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].area > f[best].area) best = i;
  }
  EXPECT_EQ(best, 20u);
}

TEST(Properties, RandomBodiesStructureAndBounds) {
  fixtures::Rng rng(21);
  for (int n = 0; n < 100; ++n) {
    const ConvexBody k = n % 2 ? fixtures::random_smooth_body(rng) : fixtures::random_polygon_body(rng, 5);
    const CenteredEllipse e = fixtures::random_ellipse(rng, fixtures::uniform(rng, 1.0, 6.0), 1.0);
    const CrossingSet cs = find_crossings(k, e);
    const double i = intersection_area(k, e);
    EXPECT_LE(i, std::min(k.area(), e.area()) * (1 + 1e-12));
    if (cs.empty()) {
      EXPECT_NEAR(i, std::min(k.area(), e.area()), 1e-9);
    } else {
      expect_structure(cs);
      EXPECT_LT(i, std::min(k.area(), e.area()) - 1e-9);
    }
    EXPECT_NEAR(symdiff_distance(k, e), symdiff_direct(k, e), 1e-7);
  }
}

TEST(Properties, UnimodularEquivariance) {
  fixtures::Rng rng(22);
  for (int n = 0; n < 40; ++n) {
    const ConvexBody k = n % 2 ? fixtures::random_smooth_body(rng) : fixtures::random_polygon_body(rng, 4);
    const CenteredEllipse e = fixtures::random_ellipse(rng, 3.0, 1.0);
    const Mat2 l = general_position_map(0.7, static_cast<std::uint64_t>(n));
    EXPECT_NEAR(intersection_area(apply_unimodular(k, l), e.transformed(l)), intersection_area(k, e),
                1e-8);
  }
}

TEST(Properties, AgreesWithMonteCarlo) {
  fixtures::Rng rng(23);
  for (int n = 0; n < 50; ++n) {
    const ConvexBody k = n % 2 ? fixtures::random_smooth_body(rng) : fixtures::random_polygon_body(rng, 5);
    const CenteredEllipse e = fixtures::random_ellipse(rng, fixtures::uniform(rng, 1.0, 6.0), 1.0);
    const OracleEstimate mc = mc_intersection_area(k, e, 200000, 100 + static_cast<std::uint64_t>(n));
    EXPECT_LE(std::abs(intersection_area(k, e) - mc.value), 4 * mc.sigma) << "instance " << n;
  }
}
