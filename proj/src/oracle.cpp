#include "mi_ellipse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/kernels.hpp"
#include "mi_ellipse/parallel.hpp"

namespace mie {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr double kRayGrowth = 1.005;
constexpr double kRayStart = 1e-3;
constexpr double kRayLimit = 1e3;
constexpr double kCapSlack = 1e-4;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// First r > 0 with p(r u) = 1, by a geometric march and bisection.
double trace_ray(const EvenQuartic& p, const Vec2& u) {
  auto f = [&](double r) { return p(r * u.x(), r * u.y()) - 1.0; };
  double lo = 0.0, hi = kRayStart;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= kRayGrowth;
    if (hi > kRayLimit) throw Error(Errc::RayRootNotFound, "ray leaves the search range");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Whether the level set {p <= 1} comes back within radius cap beyond the first root.
bool returns_within(const EvenQuartic& p, const Vec2& u, double r1, double cap) {
  for (double r = r1 * kRayGrowth; r <= cap; r *= kRayGrowth) {
    if (p(r * u.x(), r * u.y()) <= 1.0) return true;
  }
  return p(cap * u.x(), cap * u.y()) <= 1.0;
}

// Exact membership for the origin component of {p <= 1}: along the segment
// from 0 to x, p(s x) = A s^2 + B s^4 must stay <= 1 for s in [0, 1].
bool inside_origin_component(const EvenQuartic& p, double x, double y) {
  const double a = p.quadratic(x, y), b = p.quartic(x, y);
  if (a + b > 1.0) return false;
  if (b < 0.0) {
    const double tau = -a / (2.0 * b);
    if (tau > 0.0 && tau < 1.0 && a * tau + b * tau * tau > 1.0) return false;
  }
  return true;
}

Box polygon_box(const Polygon& poly, double slack) {
  Box b{1e300, -1e300, 1e300, -1e300};
  for (const Vec2& v : poly) {
    b.x0 = std::min(b.x0, v.x());
    b.x1 = std::max(b.x1, v.x());
    b.y0 = std::min(b.y0, v.y());
    b.y1 = std::max(b.y1, v.y());
  }
  const double w = slack * std::max(b.x1 - b.x0, b.y1 - b.y0);
  return {b.x0 - w, b.x1 + w, b.y0 - w, b.y1 + w};
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

int count_components(const std::vector<bool>& in, UnionFind& uf) {
  std::vector<bool> seen(in.size(), false);
  int components = 0;
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (!in[k]) continue;
    const auto root = static_cast<std::size_t>(uf.find(static_cast<int>(k)));
    if (!seen[root]) {
      seen[root] = true;
      ++components;
    }
  }
  return components;
}

}  // namespace

std::string_view to_string(OracleMethod m) noexcept {
  switch (m) {
    case OracleMethod::Mc: return "mc";
    case OracleMethod::Clip: return "clip";
    case OracleMethod::Fd: return "fd";
    case OracleMethod::Grid: return "grid";
  }
  return "mc";
}

McRegion McRegion::ellipse(const CenteredEllipse& e) {
  McRegion r;
  r.kind_ = Kind::Quadric;
  r.form_ = e.form();
  const Mat2 inv = e.form().inverse();
  const double wx = std::sqrt(inv(0, 0)), wy = std::sqrt(inv(1, 1));
  r.bounds_ = {-wx, wx, -wy, wy};
  return r;
}

McRegion McRegion::predicate(std::function<bool(double, double)> inside) {
  McRegion r;
  r.kind_ = Kind::Predicate;
  r.inside_ = std::move(inside);
  r.bounds_ = {-1e300, 1e300, -1e300, 1e300};
  return r;
}

McRegion McRegion::body(const ConvexBody& body) {
  McRegion r;
  switch (body.kind()) {
    case ConvexBody::Kind::Polygon: {
      const Polygon v = body.vertices();
      r.kind_ = Kind::Halfplanes;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec2& p = v[k];
        const Vec2& q = v[(k + 1) % v.size()];
        const Vec2 n(q.y() - p.y(), p.x() - q.x());
        r.nx_.push_back(n.x());
        r.ny_.push_back(n.y());
        r.h_.push_back(n.dot(p));
      }
      r.bounds_ = polygon_box(v, 0.0);
      return r;
    }
    case ConvexBody::Kind::Implicit: {
      const EvenQuartic& p = body.source_polynomial();
      const int n = 4096;
      double rmax = 0.0;
      std::vector<double> radii(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const double a = kPi * k / n;
        radii[static_cast<std::size_t>(k)] = trace_ray(p, Vec2(std::cos(a), std::sin(a)));
        rmax = std::max(rmax, radii[static_cast<std::size_t>(k)]);
      }
      const double cap = rmax * (1.0 + kCapSlack);
      bool clear = true;
      for (int k = 0; k < n && clear; ++k) {
        const double a = kPi * k / n;
        clear = !returns_within(p, Vec2(std::cos(a), std::sin(a)), radii[static_cast<std::size_t>(k)], cap);
      }
      r.to_source_ = body.inverse_frame();
      r.bounds_ = polygon_box(polygon_of(body, n), 1e-3);
      if (clear) {
        r.kind_ = Kind::Quartic;
        r.coeffs_ = p.coefficients();
        r.r2max_ = cap * cap;
      } else {
        const Mat2 back = r.to_source_;
        r.kind_ = Kind::Predicate;
        r.inside_ = [p, back](double x, double y) {
          const Vec2 s = back * Vec2(x, y);
          return inside_origin_component(p, s.x(), s.y());
        };
      }
      return r;
    }
    case ConvexBody::Kind::Radial: {
      ConvexBody copy = body;
      r.kind_ = Kind::Predicate;
      r.inside_ = [copy](double x, double y) {
        return x * x + y * y <= copy.radial(std::atan2(y, x));
      };
      r.bounds_ = polygon_box(polygon_of(body, 4096), 1e-3);
      return r;
    }
  }
  return r;
}

void McRegion::apply(std::span<const double> x, std::span<const double> y,
                     std::span<std::uint8_t> mask) const {
  switch (kind_) {
    case Kind::Quadric:
      kernels::mask_quadric(x, y, form_(0, 0), form_(0, 1), form_(1, 1), mask);
      return;
    case Kind::Halfplanes:
      kernels::mask_halfplanes(x, y, nx_, ny_, h_, mask);
      return;
    case Kind::Quartic: {
      std::vector<double> sx(x.size()), sy(x.size());
      const Mat2& m = to_source_;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sx[i] = m(0, 0) * x[i] + m(0, 1) * y[i];
        sy[i] = m(1, 0) * x[i] + m(1, 1) * y[i];
      }
      kernels::mask_even_quartic(sx, sy, coeffs_, r2max_, mask);
      return;
    }
    case Kind::Predicate:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask[i] && !inside_(x[i], y[i])) mask[i] = 0;
      }
      return;
  }
}

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

OracleEstimate mc_area(std::span<const McRegion> regions, const Box& box, std::uint64_t samples,
                       std::uint64_t seed) {
  if (samples < 10000) throw Error(Errc::InvalidInput, "Monte Carlo needs at least 1e4 samples");
  if (!(box.x1 > box.x0 && box.y1 > box.y0)) {
    return {0.0, 0.0, OracleMethod::Mc, seed, samples};
  }
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  const double w = box.x1 - box.x0, h = box.y1 - box.y0;
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t first = b * kBlock;
    const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, samples - first));
    std::vector<double> x(m), y(m);
    std::vector<std::uint8_t> mask(m, 1);
    constexpr double kUnit = 0x1.0p-53;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t c = 2 * (first + i);
      x[i] = box.x0 + w * (static_cast<double>(splitmix64(seed, c) >> 11) * kUnit);
      y[i] = box.y0 + h * (static_cast<double>(splitmix64(seed, c + 1) >> 11) * kUnit);
    }
    for (const McRegion& r : regions) r.apply(x, y, mask);
    hits[b] = kernels::count_mask(mask);
  });
  const std::uint64_t total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(total) / n;
  OracleEstimate est;
  est.value = box.area() * p;
  est.sigma = box.area() * std::sqrt(p * (1.0 - p) / n);
  est.method = OracleMethod::Mc;
  est.seed = seed;
  est.samples = samples;
  return est;
}

OracleEstimate mc_intersection_area(const ConvexBody& body, const CenteredEllipse& e,
                                    std::uint64_t samples, std::uint64_t seed) {
  const std::vector<McRegion> regions{McRegion::body(body), McRegion::ellipse(e)};
  const Box a = regions[0].bounds(), b = regions[1].bounds();
  const Box box{std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0),
                std::min(a.y1, b.y1)};
  return mc_area(regions, box, samples, seed);
}

Polygon polygon_of(const ConvexBody& body, int n) {
  if (n < 3) throw Error(Errc::InvalidInput, "polygon needs at least 3 sides");
  switch (body.kind()) {
    case ConvexBody::Kind::Polygon:
      return body.vertices();
    case ConvexBody::Kind::Implicit: {
      const EvenQuartic& p = body.source_polynomial();
      Polygon out(static_cast<std::size_t>(n));
      const int half = (n + 1) / 2;
      for (int k = 0; k < half; ++k) {
        const double a = kTwoPi * k / n;
        const Vec2 u(std::cos(a), std::sin(a));
        out[static_cast<std::size_t>(k)] = body.frame() * (trace_ray(p, u) * u);
      }
      for (int k = half; k < n; ++k) {
        const double a = kTwoPi * k / n;
        const Vec2 u(std::cos(a), std::sin(a));
        out[static_cast<std::size_t>(k)] =
            n % 2 == 0 ? Vec2(-out[static_cast<std::size_t>(k - n / 2)])
                       : Vec2(body.frame() * (trace_ray(p, u) * u));
      }
      return out;
    }
    case ConvexBody::Kind::Radial: {
      Polygon out;
      for (int k = 0; k < n; ++k) out.push_back(body.boundary_point(kTwoPi * k / n));
      return out;
    }
  }
  return {};
}

Polygon polygon_of(const CenteredEllipse& e, int n) {
  if (n < 3) throw Error(Errc::InvalidInput, "polygon needs at least 3 sides");
  const double k = kPi / e.area();
  const double ax = 1.0 / std::sqrt(std::exp(e.t()) * k);
  const double ay = 1.0 / std::sqrt(std::exp(-e.t()) * k);
  const double c = std::cos(e.phi()), s = std::sin(e.phi());
  Polygon out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double a = kTwoPi * j / n;
    const double x = ax * std::cos(a), y = ay * std::sin(a);
    out[static_cast<std::size_t>(j)] = Vec2(c * x - s * y, s * x + c * y);
  }
  return out;
}

double polygon_area(const Polygon& p) {
  double twice = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) twice += cross(p[k], p[(k + 1) % p.size()]);
  return 0.5 * twice;
}

Polygon clip(const Polygon& subject, const Polygon& clipper) {
  Polygon out = subject;
  for (std::size_t e = 0; e < clipper.size() && !out.empty(); ++e) {
    const Vec2& a = clipper[e];
    const Vec2 d = clipper[(e + 1) % clipper.size()] - a;
    auto side = [&](const Vec2& p) { return cross(d, p - a); };
    Polygon in = std::move(out);
    out.clear();
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Vec2& p = in[k];
      const Vec2& q = in[(k + 1) % in.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
  }
  return out;
}

OracleEstimate clip_area(const Polygon& a, const Polygon& b) {
  // Clip the finer polygon by the coarser one: fewer passes.
  const Polygon piece = a.size() >= b.size() ? clip(a, b) : clip(b, a);
  OracleEstimate est;
  est.value = piece.size() < 3 ? 0.0 : std::max(0.0, polygon_area(piece));
  est.sigma = 0.0;
  est.method = OracleMethod::Clip;
  return est;
}

double star_intersection_area(const Polygon& a, const Polygon& b) {
  struct Star {
    std::vector<double> angle;  // ascending in [0, 2 pi)
    std::vector<Vec2> vertex;
  };
  auto prepare = [](const Polygon& p) {
    Star s;
    std::vector<std::pair<double, Vec2>> tagged;
    for (const Vec2& v : p) tagged.emplace_back(wrap(std::atan2(v.y(), v.x()), kTwoPi), v);
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [t, v] : tagged) {
      s.angle.push_back(t);
      s.vertex.push_back(v);
    }
    return s;
  };
  const Star sa = prepare(a), sb = prepare(b);
  std::vector<double> cuts = sa.angle;
  cuts.insert(cuts.end(), sb.angle.begin(), sb.angle.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Edge of the star crossed by directions just after `theta`.
  auto edge = [](const Star& s, double theta) {
    const std::size_t m = s.angle.size();
    const auto it = std::upper_bound(s.angle.begin(), s.angle.end(), theta);
    const std::size_t hi = static_cast<std::size_t>(it - s.angle.begin()) % m;
    const std::size_t lo = (hi + m - 1) % m;
    return std::pair<Vec2, Vec2>{s.vertex[lo], s.vertex[hi]};
  };
  auto on_ray = [](const std::pair<Vec2, Vec2>& e, double theta) {
    const Vec2 u(std::cos(theta), std::sin(theta));
    const Vec2 d = e.second - e.first;
    return Vec2((cross(e.first, d) / cross(u, d)) * u);
  };

  double twice = 0.0;
  const std::size_t m = cuts.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double t0 = cuts[k];
    const double t1 = k + 1 < m ? cuts[k + 1] : cuts[0] + kTwoPi;
    const double mid = 0.5 * (t0 + t1);
    const auto ea = edge(sa, wrap(mid, kTwoPi)), eb = edge(sb, wrap(mid, kTwoPi));
    const Vec2 a0 = on_ray(ea, t0), a1 = on_ray(ea, t1);
    const Vec2 b0 = on_ray(eb, t0), b1 = on_ray(eb, t1);
    const bool a_in0 = a0.squaredNorm() <= b0.squaredNorm();
    const bool a_in1 = a1.squaredNorm() <= b1.squaredNorm();
    const Vec2 i0 = a_in0 ? a0 : b0, i1 = a_in1 ? a1 : b1;
    if (a_in0 == a_in1) {
      twice += cross(i0, i1);
      continue;
    }
    // The two edges cross inside the sector.
    const Vec2 da = ea.second - ea.first, db = eb.second - eb.first;
    const double den = cross(da, db);
    const Vec2 x = ea.first + (cross(eb.first - ea.first, db) / den) * da;
    twice += cross(i0, x) + cross(x, i1);
  }
  return 0.5 * twice;
}

OracleEstimate fd_derivative(const ConvexBody& body, int order, double h) {
  if (order != 1 && order != 2) throw Error(Errc::InvalidInput, "order must be 1 or 2");
  if (!(h > 0.0)) throw Error(Errc::InvalidInput, "step must be positive");
  const double plus = intersection_area(body, standard_ellipse(h));
  const double minus = intersection_area(body, standard_ellipse(-h));
  OracleEstimate est;
  est.method = OracleMethod::Fd;
  if (order == 1) {
    est.value = (plus - minus) / (2.0 * h);
  } else {
    const double zero = intersection_area(body, standard_ellipse(0.0));
    est.value = (plus - 2.0 * zero + minus) / (h * h);
  }
  return est;
}

GridSearchResult grid_search_mi(const ConvexBody& body, double lambda, double t_span, int grid,
                                double threshold, int sides) {
  if (grid < 21) throw Error(Errc::InvalidInput, "grid must be at least 21");
  if (!(lambda > 0.0) || !(t_span > 0.0)) {
    throw Error(Errc::InvalidInput, "lambda and t_span must be positive");
  }
  const Polygon pk = polygon_of(body, sides);
  auto area_at = [&](double a, double b) {
    const double t = std::hypot(a, b);
    const double phi = t == 0.0 ? 0.0 : 0.5 * std::atan2(b, a);
    return star_intersection_area(pk, polygon_of(CenteredEllipse::from_params(t, phi, lambda), sides));
  };
  const int g = grid;
  const auto cells = static_cast<std::size_t>(g * g);
  const double dt = t_span / (g - 1);

  // Coarse polar grid: node (i, j) at t = i dt, phi = j pi / g.
  std::vector<double> coarse(cells);
  parallel_for(cells, [&](std::size_t k) {
    const int i = static_cast<int>(k) / g, j = static_cast<int>(k) % g;
    const double t = i * dt, phi = kPi * j / g;
    coarse[k] = area_at(t * std::cos(2.0 * phi), t * std::sin(2.0 * phi));
  });
  const auto best_coarse =
      static_cast<int>(std::max_element(coarse.begin(), coarse.end()) - coarse.begin());
  const double cmax = coarse[static_cast<std::size_t>(best_coarse)];
  std::vector<bool> in(cells);
  for (std::size_t k = 0; k < cells; ++k) in[k] = coarse[k] >= cmax - threshold;
  UnionFind uf(g * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const int k = i * g + j;
      if (!in[static_cast<std::size_t>(k)]) continue;
      const int up = (i + 1) * g + j, around = i * g + (j + 1) % g;
      if (i + 1 < g && in[static_cast<std::size_t>(up)]) uf.unite(k, up);
      if (in[static_cast<std::size_t>(around)]) uf.unite(k, around);
      // Every phi names the same disk at t = 0.
      if (i == 0 && in[0]) uf.unite(k, 0);
    }
  }
  const bool coarse_connected = count_components(in, uf) == 1;
  int count = static_cast<int>(std::count(in.begin(), in.end(), true));

  // Refined Cartesian grid in (a, b) covering the neighbours of the best node.
  const int bi = best_coarse / g, bj = best_coarse % g;
  const double bt = bi * dt, bphi = kPi * bj / g;
  const double ca = bt * std::cos(2.0 * bphi), cb = bt * std::sin(2.0 * bphi);
  const double half = std::max(dt, bt * kTwoPi / g);
  const double cell = 2.0 * half / (g - 1);
  std::vector<double> fine(cells);
  parallel_for(cells, [&](std::size_t k) {
    const int i = static_cast<int>(k) / g, j = static_cast<int>(k) % g;
    fine[k] = area_at(ca - half + i * cell, cb - half + j * cell);
  });
  const auto best_fine = static_cast<int>(std::max_element(fine.begin(), fine.end()) - fine.begin());
  const double fmax = fine[static_cast<std::size_t>(best_fine)];
  std::vector<bool> fin(cells);
  for (std::size_t k = 0; k < cells; ++k) fin[k] = fine[k] >= fmax - threshold;
  UnionFind uf2(g * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const int k = i * g + j;
      if (!fin[static_cast<std::size_t>(k)]) continue;
      if (i + 1 < g && fin[static_cast<std::size_t>(k + g)]) uf2.unite(k, k + g);
      if (j + 1 < g && fin[static_cast<std::size_t>(k + 1)]) uf2.unite(k, k + 1);
    }
  }
  const bool fine_connected = count_components(fin, uf2) == 1;

  GridSearchResult r;
  r.a = ca - half + (best_fine / g) * cell;
  r.b = cb - half + (best_fine % g) * cell;
  r.t = std::hypot(r.a, r.b);
  r.phi = r.t == 0.0 ? 0.0 : wrap(0.5 * std::atan2(r.b, r.a), kPi);
  r.coarse_cell = dt;
  r.refined_cell = cell;
  r.connected = coarse_connected && fine_connected;
  r.superlevel_count = count;
  r.threshold = threshold;
  r.estimate.value = std::max(fmax, cmax);
  r.estimate.sigma = 0.0;
  r.estimate.method = OracleMethod::Grid;
  r.estimate.samples = 2 * cells;
  return r;
}

}  // namespace mie
