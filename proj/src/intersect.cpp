#include "mi_ellipse/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/parallel.hpp"
#include "golden.hpp"
#include "quadrature.hpp"

namespace mie {

namespace {

constexpr double kZeroLevel = 1e-13;
constexpr double kTouchLevel = 1e-12;
constexpr double kSlopeStep = 1e-6;
// Grid used when a body is only needed for a few radial evaluations.
constexpr int kThinGrid = 8;

struct Root {
  double xi = 0.0;
  Parity parity = Parity::Enter;
};

struct Scan {
  std::vector<Root> roots;  // on [0, pi), ascending
  std::vector<double> touchings;
  bool coincident = false;
  bool arc_contact = false;
  int sign = 1;  // sign of h where there are no roots
};

template <class H>
double bisect(const H& h, double lo, double hi, bool lo_positive) {
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((h(mid) >= 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Scan scan_unit(const ConvexBody& body) {
  const int n = kRootScanIntervals;
  const double step = kPi / n;
  auto h = [&](double theta) { return body.radial(theta) - 1.0; };
  std::vector<double> hv(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) hv[static_cast<std::size_t>(k)] = h(step * k);
  auto at = [&](int k) { return hv[static_cast<std::size_t>(((k % n) + n) % n)]; };
  auto node = [&](int k) { return step * k; };

  Scan s;
  if (std::all_of(hv.begin(), hv.end(), [](double v) { return std::abs(v) <= kZeroLevel; })) {
    s.coincident = true;
    s.sign = 0;
    return s;
  }
  // Runs of vanishing samples mean contact along an arc.
  int run = 0, longest = 0;
  for (int k = 0; k < 2 * n; ++k) {
    run = std::abs(at(k)) <= kZeroLevel ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  if (longest >= 3) s.arc_contact = true;

  auto positive = [&](int k) { return at(k) >= 0.0; };
  for (int k = 0; k < n; ++k) {
    const bool p0 = positive(k), p1 = positive(k + 1);
    if (p0 != p1) {
      double xi = bisect(h, node(k), node(k + 1), p0);
      s.roots.push_back({wrap(xi, kPi), p0 ? Parity::Enter : Parity::Exit});
    }
    // Near-zero local minimum of |h| without a sign change: a close pair of
    // crossings or a touching point may hide between the samples.
    const double a0 = std::abs(at(k - 1)), a1 = std::abs(at(k)), a2 = std::abs(at(k + 1));
    if (a1 < a0 && a1 <= a2 && a1 < 1e-2 && positive(k - 1) == p0 && p0 == p1) {
      const double sg = p0 ? 1.0 : -1.0;
      const double lo = node(k - 1), hi = node(k + 1);
      const double m = detail::golden_min([&](double x) { return sg * h(x); }, lo, hi);
      const double v = sg * h(m);
      if (v < 0.0) {
        const double r1 = bisect(h, lo, m, p0);
        const double r2 = bisect(h, m, hi, !p0);
        s.roots.push_back({wrap(r1, kPi), p0 ? Parity::Enter : Parity::Exit});
        s.roots.push_back({wrap(r2, kPi), p0 ? Parity::Exit : Parity::Enter});
      } else if (v <= kTouchLevel) {
        s.touchings.push_back(wrap(m, kPi));
      }
    }
  }
  std::sort(s.roots.begin(), s.roots.end(), [](const Root& a, const Root& b) { return a.xi < b.xi; });
  s.sign = positive(0) ? 1 : -1;
  return s;
}

Crossing make_crossing(const ConvexBody& body, double xi, Parity parity, const Mat2& back) {
  Crossing c;
  c.xi = xi;
  c.parity = parity;
  c.slope = (body.radial(xi + kSlopeStep) - body.radial(xi - kSlopeStep)) / (2.0 * kSlopeStep);
  c.alpha = std::atan(0.5 * std::abs(c.slope));
  c.tangency = std::abs(c.slope) < kTangencySlope;
  const Vec2 p = back * unit(xi);
  c.theta = wrap(std::atan2(p.y(), p.x()), kTwoPi);
  return c;
}

// Mirror a half-turn list by +pi and anchor index 1 at the first enter.
void complete(CrossingSet& cs, std::vector<Crossing> half) {
  std::vector<Crossing> all = half;
  for (Crossing c : half) {
    c.xi = wrap(c.xi + kPi, kTwoPi);
    c.theta = wrap(c.theta + kPi, kTwoPi);
    all.push_back(c);
  }
  std::sort(all.begin(), all.end(), [](const Crossing& a, const Crossing& b) { return a.xi < b.xi; });
  const auto first = std::find_if(all.begin(), all.end(),
                                  [](const Crossing& c) { return c.parity == Parity::Enter; });
  if (first != all.end()) std::rotate(all.begin(), first, all.end());
  cs.crossings = std::move(all);
  cs.n = static_cast<int>(cs.crossings.size() / 4);
}

CrossingSet crossings_in_frame(const ConvexBody& framed, const DiskFrame& frame) {
  const Scan s = scan_unit(framed);
  CrossingSet cs;
  cs.frame = frame;
  cs.touchings = s.touchings;
  if (s.coincident) {
    cs.containment = Containment::Coincident;
    return cs;
  }
  if (s.arc_contact) {
    throw Error(Errc::UnresolvedRoot, "boundary runs along the ellipse over an arc");
  }
  if (s.roots.empty()) {
    cs.containment = s.sign > 0 ? Containment::EllipseInsideBody : Containment::BodyInsideEllipse;
    return cs;
  }
  const std::size_t m = s.roots.size();
  bool ok = m % 2 == 0;
  for (std::size_t k = 0; ok && k < m; ++k) {
    if (s.roots[k].parity == s.roots[(k + 1) % m].parity) ok = false;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "inconsistent sign pattern: " << m << " roots on a half turn";
    throw Error(Errc::UnresolvedRoot, msg.str());
  }
  const Mat2 back = frame.map().inverse();
  std::vector<Crossing> half;
  for (const Root& r : s.roots) half.push_back(make_crossing(framed, r.xi, r.parity, back));
  complete(cs, std::move(half));
  return cs;
}

double unit_intersection_scan(const ConvexBody& framed, const Scan& s) {
  std::vector<double> breaks = framed.kinks();
  for (const Root& r : s.roots) breaks.push_back(r.xi);
  breaks.insert(breaks.end(), s.touchings.begin(), s.touchings.end());
  return detail::integrate_split([&](double t) { return std::min(framed.radial(t), 1.0); }, 0.0,
                                 kPi, breaks);
}

}  // namespace

bool CrossingSet::transverse() const {
  if (crossings.empty() || !touchings.empty()) return false;
  return std::none_of(crossings.begin(), crossings.end(), [](const Crossing& c) { return c.tangency; });
}

CrossingSet CrossingSet::from_half_turn(std::vector<double> xi, std::vector<double> alpha,
                                        Parity first) {
  if (xi.size() != alpha.size() || xi.empty() || xi.size() % 2 != 0) {
    throw Error(Errc::InvalidInput, "need an even, nonzero number of crossings per half turn");
  }
  std::vector<Crossing> half;
  Parity p = first;
  std::vector<std::size_t> order(xi.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return wrap(xi[a], kPi) < wrap(xi[b], kPi);
  });
  for (std::size_t k : order) {
    Crossing c;
    c.xi = wrap(xi[k], kPi);
    c.theta = c.xi;
    c.parity = p;
    c.alpha = alpha[k];
    c.slope = (p == Parity::Enter ? -2.0 : 2.0) * std::tan(alpha[k]);
    c.tangency = std::abs(c.slope) < kTangencySlope;
    half.push_back(c);
    p = p == Parity::Enter ? Parity::Exit : Parity::Enter;
  }
  CrossingSet cs;
  complete(cs, std::move(half));
  return cs;
}

CrossingSet CrossingSet::rotated(double phi) const {
  CrossingSet out = *this;
  // Any 2n consecutive crossings cover exactly a half turn.
  std::vector<Crossing> half;
  for (std::size_t k = 0; k < crossings.size() / 2; ++k) {
    Crossing r = crossings[k];
    r.xi = wrap(r.xi + phi, kPi);
    r.theta = wrap(r.theta + phi, kTwoPi);
    half.push_back(r);
  }
  out.touchings.clear();
  for (double t : touchings) out.touchings.push_back(wrap(t + phi, kPi));
  complete(out, std::move(half));
  return out;
}

CrossingSet find_unit_crossings(const ConvexBody& body, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidInput, "tolerance must be positive");
  return crossings_in_frame(body, DiskFrame{Mat2::Identity(), 1.0});
}

CrossingSet find_crossings(const ConvexBody& body, const CenteredEllipse& ellipse, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidInput, "tolerance must be positive");
  const DiskFrame frame = normalize_to_disk(ellipse);
  return crossings_in_frame(body.linear_image(frame.map(), kThinGrid), frame);
}

double unit_disk_intersection(const ConvexBody& body) {
  const Scan s = scan_unit(body);
  return unit_intersection_scan(body, s);
}

double intersection_area(const ConvexBody& body, const CenteredEllipse& ellipse) {
  const DiskFrame frame = normalize_to_disk(ellipse);
  const ConvexBody framed = body.linear_image(frame.map(), kThinGrid);
  return unit_disk_intersection(framed) / (frame.scale * frame.scale);
}

double symdiff_distance(const ConvexBody& body, const CenteredEllipse& ellipse) {
  return body.area() + ellipse.area() - 2.0 * intersection_area(body, ellipse);
}

double symdiff_direct(const ConvexBody& body, const CenteredEllipse& ellipse) {
  const DiskFrame frame = normalize_to_disk(ellipse);
  const ConvexBody framed = body.linear_image(frame.map(), kThinGrid);
  const Scan s = scan_unit(framed);
  const Mat2 back = frame.map().inverse();
  std::vector<double> breaks = body.kinks();
  auto original = [&](double xi) {
    const Vec2 p = back * unit(xi);
    return wrap(std::atan2(p.y(), p.x()), kPi);
  };
  for (const Root& r : s.roots) breaks.push_back(original(r.xi));
  for (double t : s.touchings) breaks.push_back(original(t));
  return detail::integrate_split(
      [&](double t) { return std::abs(body.radial(t) - ellipse_radial(ellipse, t)); }, 0.0, kPi,
      breaks);
}

std::vector<ProfileSample> intersection_profile(const ConvexBody& body, double t_min,
                                                double t_max, int steps) {
  if (steps < 2) throw Error(Errc::InvalidInput, "profile needs at least 2 steps");
  std::vector<ProfileSample> out(static_cast<std::size_t>(steps));
  parallel_for(out.size(), [&](std::size_t k) {
    const double t = t_min + (t_max - t_min) * static_cast<double>(k) / (steps - 1);
    out[k] = {t, intersection_area(body, standard_ellipse(t))};
  });
  return out;
}

}  // namespace mie
