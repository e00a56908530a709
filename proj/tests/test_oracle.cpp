#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/io.hpp"
#include "mi_ellipse/oracle.hpp"
#include "random_bodies.hpp"

using namespace mie;

namespace {

ConvexBody body(const char* name) { return *builtin_body(name); }

const double kStripDisk = 1.9132229549810362;

Polygon translate(Polygon p, Vec2 v) {
  for (Vec2& x : p) x += v;
  return p;
}

}  // namespace

TEST(Splitmix, KnownStream) {
  // Reference outputs of splitmix64 seeded with 0.
  EXPECT_EQ(splitmix64(0, 0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(0, 1), 0x6e789e6aa1b965f4ULL);
  EXPECT_NE(splitmix64(1, 0), splitmix64(0, 0));
}

TEST(Mc, UnitDiskInSquare) {
  const McRegion r[] = {McRegion::ellipse(CenteredEllipse())};
  const OracleEstimate e = mc_area(r, Box{}, 1000000, 11);
  EXPECT_EQ(e.method, OracleMethod::Mc);
  EXPECT_EQ(e.seed, 11u);
  EXPECT_EQ(e.samples, 1000000u);
  EXPECT_GT(e.sigma, 0.0);
  EXPECT_LE(std::abs(e.value - kPi), 4 * e.sigma);
}

TEST(Mc, SquareAndStripAgainstDisk) {
  const OracleEstimate sq = mc_intersection_area(body("square"), CenteredEllipse(), 1000000, 12);
  EXPECT_LE(std::abs(sq.value - kPi), 4 * sq.sigma);
  const OracleEstimate st = mc_intersection_area(body("strip"), CenteredEllipse(), 1000000, 13);
  EXPECT_LE(std::abs(st.value - kStripDisk), 4 * st.sigma);
}

TEST(Mc, ReproducibleAndRejectsTinyRuns) {
  const OracleEstimate a = mc_intersection_area(body("fig1"), standard_ellipse(0.4), 100000, 5);
  const OracleEstimate b = mc_intersection_area(body("fig1"), standard_ellipse(0.4), 100000, 5);
  EXPECT_EQ(std::memcmp(&a.value, &b.value, sizeof(double)), 0);
  const OracleEstimate c = mc_intersection_area(body("fig1"), standard_ellipse(0.4), 100000, 6);
  EXPECT_NE(a.value, c.value);
  const McRegion r[] = {McRegion::ellipse(CenteredEllipse())};
  try {
    mc_area(r, Box{}, 9999, 1);
    FAIL() << "expected InvalidInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidInput);
  }
}

TEST(Mc, ImplicitMembershipMatchesBoundary) {
  // Points just inside and outside the fig1 boundary.
  const ConvexBody k = body("fig1");
  const McRegion r = McRegion::body(k);
  std::vector<double> x, y;
  for (int i = 0; i < 64; ++i) {
    const double th = kTwoPi * i / 64.0;
    const double rr = std::sqrt(k.radial(th));
    for (double s : {1 - 1e-6, 1 + 1e-6}) {
      x.push_back(s * rr * std::cos(th));
      y.push_back(s * rr * std::sin(th));
    }
  }
  std::vector<std::uint8_t> m(x.size(), 1);
  r.apply(x, y, m);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m[i], i % 2 == 0 ? 1 : 0) << i;
}

TEST(Clip, Examples) {
  const Polygon sq = polygon_of(body("square"));
  EXPECT_EQ(sq.size(), 4u);
  const OracleEstimate same = clip_area(sq, sq);
  EXPECT_EQ(same.method, OracleMethod::Clip);
  EXPECT_EQ(same.sigma, 0.0);
  EXPECT_NEAR(same.value, 4.0, 1e-14);

  // Inscribed 4096-gon deficit: pi - (n/2) sin(2 pi / n) ~ 2 pi^3 / (3 n^2).
  const double n = 4096;
  const double deficit = kPi - n / 2 * std::sin(kTwoPi / n);
  EXPECT_NEAR(deficit, 2 * std::pow(kPi, 3) / (3 * n * n), 1e-11);
  const OracleEstimate d = clip_area(sq, polygon_of(CenteredEllipse()));
  EXPECT_NEAR(d.value, kPi - deficit, 1e-12);
  EXPECT_LT(kPi - d.value, 1e-6 * kPi);

  EXPECT_EQ(clip_area(sq, translate(sq, Vec2(3.0, 0.0))).value, 0.0);
  EXPECT_NEAR(clip_area(sq, translate(sq, Vec2(1.0, 1.0))).value, 1.0, 1e-14);
}

TEST(Clip, ImplicitTracing) {
  const Polygon p = polygon_of(body("fig1"));
  EXPECT_EQ(p.size(), 4096u);
  // Frozen from the 1e7-sample Monte Carlo oracle (2.93503 ± 3.3e-4).
  EXPECT_NEAR(polygon_area(p), 2.93503, 3 * 3.3e-4);
  EXPECT_NEAR(polygon_area(p), body("fig1").area(), 1e-5);
}

TEST(StarIntersection, MatchesClipping) {
  fixtures::Rng rng(61);
  for (int n = 0; n < 30; ++n) {
    const Polygon a = polygon_of(fixtures::random_polygon_body(rng, 3 + n % 6));
    const Polygon b = polygon_of(fixtures::random_ellipse(rng, fixtures::uniform(rng, 1, 6), 1.0), 256);
    EXPECT_NEAR(star_intersection_area(a, b), clip_area(a, b).value, 1e-12);
  }
}

TEST(Fd, Examples) {
  const OracleEstimate d = fd_derivative(body("disk"), 1, 1e-4);
  EXPECT_EQ(d.method, OracleMethod::Fd);
  EXPECT_NEAR(d.value, 0.0, 1e-10);
  EXPECT_NEAR(fd_derivative(body("strip"), 1, 1e-4).value, -std::sqrt(3.0) / 2, 1e-5);
  EXPECT_NEAR(fd_derivative(body("strip"), 2, 1e-3).value, 1 / (2 * std::sqrt(3.0)), 1e-3);
  // Closed form for the disk: I(t) = 4 arctan(e^{-|t|/2}), a corner at t = 0.
  const double h = 1e-3;
  const double expect = 2 * (4 * std::atan(std::exp(-h / 2)) - kPi) / (h * h);
  EXPECT_NEAR(fd_derivative(body("disk"), 2, h).value, expect, 1e-6);
  for (int order : {0, 3}) {
    try {
      fd_derivative(body("disk"), order, h);
      FAIL() << "expected InvalidInput";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidInput);
    }
  }
}

TEST(GridSearch, Square) {
  const GridSearchResult g = grid_search_mi(body("square"), kPi);
  EXPECT_EQ(g.estimate.method, OracleMethod::Grid);
  EXPECT_LE(std::hypot(g.a, g.b), g.refined_cell);
  EXPECT_TRUE(g.connected);
}

TEST(GridSearch, Fig1) {
  const GridSearchResult g = grid_search_mi(body("fig1"), kPi);
  EXPECT_LE(std::abs(g.a), g.refined_cell);
  EXPECT_LE(std::abs(g.b), g.refined_cell);
  EXPECT_TRUE(g.connected);
  EXPECT_GT(g.superlevel_count, 0);
}

TEST(GridSearch, RectangleBelowJohnArea) {
  // Every ellipse of area 3 inside K ties; the tie set is still connected.
  const GridSearchResult g = grid_search_mi(body("rect21"), 3.0);
  EXPECT_TRUE(g.connected);
  EXPECT_NEAR(g.estimate.value, 3.0, 1e-4);
  try {
    grid_search_mi(body("rect21"), 3.0, 2.0, 11);
    FAIL() << "expected InvalidInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidInput);
  }
}

TEST(Properties, AnalyticAgreesWithClipping) {
  fixtures::Rng rng(62);
  for (int n = 0; n < 100; ++n) {
    const ConvexBody k = fixtures::random_polygon_body(rng, 3 + n % 7);
    const CenteredEllipse e = fixtures::random_ellipse(rng, fixtures::uniform(rng, 0.5, 8.0), 1.5);
    const double exact = intersection_area(k, e);
    const OracleEstimate c = clip_area(polygon_of(k), polygon_of(e));
    EXPECT_LE(std::abs(exact - c.value), 1e-5 * exact) << n;
  }
}

TEST(Properties, MonteCarloAgreesWithClipping) {
  fixtures::Rng rng(63);
  for (int n = 0; n < 20; ++n) {
    const ConvexBody k = fixtures::random_polygon_body(rng, 3 + n % 5);
    const CenteredEllipse e = fixtures::random_ellipse(rng, fixtures::uniform(rng, 1.0, 6.0), 1.0);
    const OracleEstimate mc = mc_intersection_area(k, e, 200000, 300 + static_cast<std::uint64_t>(n));
    const OracleEstimate c = clip_area(polygon_of(k), polygon_of(e));
    EXPECT_LE(std::abs(mc.value - c.value), 4 * mc.sigma) << n;
  }
}
