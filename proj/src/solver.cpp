#include "mi_ellipse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "golden.hpp"
#include "mi_ellipse/error.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/parallel.hpp"
#include "mi_ellipse/variation.hpp"
#include "quadrature.hpp"

namespace mie {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kArmijo = 0.1;
constexpr double kShrink = 0.5;
constexpr double kMinStep = 1e-10;
constexpr double kMaxStep = 1.0;
constexpr int kThinGrid = 8;

// D computed straight from the crossing positions, tangencies or not.
std::complex<double> raw_residual(const CrossingSet& cs) {
  std::complex<double> d = 0.0;
  for (std::size_t k = 0; k < cs.crossings.size(); ++k) {
    const std::complex<double> z2 = std::polar(1.0, 2.0 * cs.crossings[k].xi);
    d += k % 2 == 0 ? z2 : -z2;
  }
  return d;
}

// Area of the framed body inside {y : y^T exp(X) y <= 1}.
double chart_value(const ConvexBody& framed, double a, double b) {
  Mat2 x;
  x << a, b, b, -a;
  return intersection_area(framed, CenteredEllipse(exp_traceless(x)));
}

struct Hessian {
  double aa = kNaN, ab = kNaN, bb = kNaN;
  bool negative_definite() const { return aa < 0.0 && aa * bb - ab * ab > 0.0; }
};

// Second derivatives in the chart: along (cos 2psi, sin 2psi) the ellipse is
// R_psi E_s R_psi^T, i.e. the body rotated by -psi.
Hessian chart_hessian(const CrossingSet& cs) {
  Hessian h;
  h.aa = deriv2(cs);
  h.bb = deriv2_rotated(cs, -kPi / 4.0);
  const double diag = deriv2_rotated(cs, -kPi / 8.0);
  h.ab = diag - 0.5 * (h.aa + h.bb);
  return h;
}

Mat2 warm_form(const ExtremalResult& john, const ExtremalResult& loewner, double lambda) {
  const double lj = std::log(john.ellipse.area()), ll = std::log(loewner.ellipse.area());
  double f = ll - lj > 1e-15 ? (std::log(lambda) - lj) / (ll - lj) : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  const Mat2 a = john.ellipse.with_area(lambda).form();
  const Mat2 b = loewner.ellipse.with_area(lambda).form();
  return CenteredEllipse(spd_geodesic(a, b, f)).with_area(lambda).form();
}

}  // namespace

MIResult mi_ellipse(const ConvexBody& body, double lambda, double tol) {
  MIOptions o;
  o.tol = tol;
  return mi_ellipse(body, lambda, o);
}

MIResult mi_ellipse(const ConvexBody& body, double lambda, const MIOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::LambdaOutOfRange, "lambda must be positive");
  }
  const ExtremalResult john = options.john ? *options.john : john_ellipse(body);
  const ExtremalResult loewner = options.loewner ? *options.loewner : loewner_ellipse(body);
  const double lo = john.ellipse.area(), hi = loewner.ellipse.area();
  if (lambda < lo * (1.0 - 1e-9) || lambda > hi * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " outside [" << lo << ", " << hi << "]";
    throw Error(Errc::LambdaOutOfRange, msg.str());
  }
  // At the ends the only ellipse inside K (resp. containing K) is optimal.
  for (const ExtremalResult* end : {&john, &loewner}) {
    if (std::abs(lambda - end->ellipse.area()) <= 1e-9 * lambda) {
      MIResult res;
      res.lambda = lambda;
      res.ellipse = end->ellipse;
      res.intersection = intersection_area(body, res.ellipse);
      res.residual = 0.0;
      res.concavity_a = res.concavity_b = kNaN;
      res.converged = true;
      return res;
    }
  }

  // Work with c K so the target area is pi and the disk frame is unimodular.
  const double c = std::sqrt(kPi / lambda);
  const ConvexBody scaled = body.linear_image(c * Mat2::Identity(), kThinGrid);
  const double cap = std::min(kPi, scaled.area());
  const Mat2 start = options.warm_start ? CenteredEllipse(*options.warm_start).with_area(lambda).form()
                                        : warm_form(john, loewner, lambda);
  CenteredEllipse current = CenteredEllipse(start).transformed(c * Mat2::Identity());

  MIResult res;
  res.lambda = lambda;
  double window = 0.1;
  for (int it = 0;; ++it) {
    const Mat2 frame = normalize_to_disk(current).unimodular;
    const ConvexBody framed = scaled.linear_image(frame, kThinGrid);
    const CrossingSet cs = find_unit_crossings(framed);
    const double value = unit_disk_intersection(framed);
    res.iterations = it;
    res.intersection = value;

    if (cs.empty()) {
      // Disk inside K, K inside the disk, or equal: the cap is attained.
      res.residual = 0.0;
      res.converged = value >= cap * (1.0 - 1e-9);
      res.concavity_a = res.concavity_b = kNaN;
      break;
    }
    const std::complex<double> d = raw_residual(cs);
    res.residual = std::abs(d);
    const bool transverse = cs.transverse();
    if (transverse && res.residual <= options.tol) {
      res.converged = true;
      const Hessian h = chart_hessian(cs);
      res.concavity_a = h.aa;
      res.concavity_b = h.bb;
      break;
    }
    if (it >= options.max_iterations) {
      std::ostringstream msg;
      msg << "no convergence after " << it << " iterations, |D| = " << res.residual;
      throw Error(Errc::NoConvergence, msg.str());
    }

    double a = 0.0, b = 0.0;
    bool moved = false;
    if (transverse) {
      const double ga = -0.25 * d.imag(), gb = 0.25 * d.real();
      const Hessian h = chart_hessian(cs);
      auto try_direction = [&](double pa, double pb, bool newton) {
        const double len = std::hypot(pa, pb);
        if (len > kMaxStep) {
          pa *= kMaxStep / len;
          pb *= kMaxStep / len;
        }
        const double slope = ga * pa + gb * pb;
        if (!(slope > 0.0)) return false;
        for (double alpha = 1.0; alpha * std::hypot(pa, pb) > kMinStep; alpha *= kShrink) {
          if (chart_value(framed, alpha * pa, alpha * pb) >= value + kArmijo * alpha * slope) {
            a = alpha * pa;
            b = alpha * pb;
            return true;
          }
        }
        // Below quadrature resolution: trust a short Newton step if it
        // reduces the residual.
        if (newton && std::hypot(pa, pb) < 1e-5) {
          Mat2 x;
          x << pa, pb, pb, -pa;
          const Mat2 q = frame.transpose() * exp_traceless(x) * frame;
          const ConvexBody next = scaled.linear_image(normalize_to_disk(CenteredEllipse(q)).unimodular,
                                                      kThinGrid);
          const CrossingSet ns = find_unit_crossings(next);
          if (!ns.empty() && std::abs(raw_residual(ns)) < res.residual) {
            a = pa;
            b = pb;
            return true;
          }
        }
        return false;
      };
      if (h.negative_definite()) {
        const double det = h.aa * h.bb - h.ab * h.ab;
        const double pa = -(h.bb * ga - h.ab * gb) / det;
        const double pb = -(-h.ab * ga + h.aa * gb) / det;
        moved = try_direction(pa, pb, true);
      }
      if (!moved) {
        const double g = std::hypot(ga, gb);
        const double scale = std::min(1.0, 0.25 / g);
        moved = try_direction(ga * scale, gb * scale, false);
      }
      if (!moved) {
        res.converged = res.residual <= options.tol;
        if (!res.converged) {
          std::ostringstream msg;
          msg << "line search stalled at |D| = " << res.residual;
          throw Error(Errc::NoConvergence, msg.str());
        }
        break;
      }
    } else {
      // Tangency: D is unreliable, search each chart axis directly.
      const double ba = detail::golden_max([&](double s) { return chart_value(framed, s, 0.0); },
                                           -window, window, 60);
      const double fa = chart_value(framed, ba, 0.0);
      if (fa > value) a = ba;
      const double bb = detail::golden_max([&](double s) { return chart_value(framed, a, s); },
                                           -window, window, 60);
      if (chart_value(framed, a, bb) > std::max(fa, value)) b = bb;
      moved = a != 0.0 || b != 0.0;
      if (!moved) {
        window *= 0.1;
        if (window < kMinStep) {
          res.converged = true;
          res.concavity_a = res.concavity_b = kNaN;
          break;
        }
        continue;
      }
      window = std::max(4.0 * std::hypot(a, b), 1e-6);
    }
    Mat2 x;
    x << a, b, b, -a;
    current = CenteredEllipse(frame.transpose() * exp_traceless(x) * frame);
    if (std::hypot(a, b) <= kMinStep) {
      res.converged = res.residual <= options.tol || !transverse;
      break;
    }
  }
  res.ellipse = current.transformed(Mat2::Identity() / c);
  res.intersection /= c * c;
  return res;
}

std::vector<FamilyPoint> mi_family(const ConvexBody& body, int steps, double tol) {
  if (steps < 2) throw Error(Errc::InvalidInput, "family needs at least 2 steps");
  MIOptions base;
  base.tol = tol;
  base.john = john_ellipse(body);
  base.loewner = loewner_ellipse(body);
  const double lo = base.john->ellipse.area(), hi = base.loewner->ellipse.area();
  if (hi - lo <= 1e-9 * lo) {
    return {{lo, mi_ellipse(body, lo, base)}};
  }
  std::vector<double> lambdas(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) lambdas[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
  lambdas.back() = hi;

  // Sequential coarse sweep, each solve seeded by its predecessor.
  std::vector<Mat2> seeds(lambdas.size());
  MIOptions coarse = base;
  coarse.tol = std::max(tol, 1e-4);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    seeds[k] = mi_ellipse(body, lambdas[k], coarse).ellipse.form();
    coarse.warm_start = seeds[k];
  }
  std::vector<FamilyPoint> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t k) {
    MIOptions o = base;
    o.warm_start = seeds[k];
    out[k] = {lambdas[k], mi_ellipse(body, lambdas[k], o)};
  });
  return out;
}

double hausdorff_distance(const CenteredEllipse& a, const CenteredEllipse& b) {
  const Mat2 ia = a.form().inverse(), ib = b.form().inverse();
  auto gap = [&](double th) {
    const Vec2 u = unit(th);
    return std::abs(std::sqrt(u.dot(ia * u)) - std::sqrt(u.dot(ib * u)));
  };
  const int n = 1440;
  int arg = 0;
  double best = -1.0;
  for (int k = 0; k < n; ++k) {
    const double v = gap(kPi * k / n);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  const double step = kPi / n;
  return std::max(best, gap(detail::golden_max(gap, step * (arg - 1), step * (arg + 1), 60)));
}

double shifted_intersection_area(const ConvexBody& body, const CenteredEllipse& e, const Vec2& v) {
  const Vec2 c = 0.5 * v;
  const Mat2& q = e.form();
  const Vec2 w = c - v;
  auto inside_body = [&](const Vec2& p) {
    const double r2 = p.squaredNorm();
    return r2 == 0.0 || r2 <= body.radial(std::atan2(p.y(), p.x()));
  };
  if (!inside_body(c) || !(w.dot(q * w) < 1.0)) {
    throw Error(Errc::InvalidInput, "offset too large: v/2 must lie in both sets");
  }
  std::vector<Vec2> verts, normals;
  std::vector<double> offsets;
  if (body.kind() == ConvexBody::Kind::Polygon) {
    verts = body.vertices();
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const Vec2 edge = verts[(k + 1) % verts.size()] - verts[k];
      const Vec2 n = Vec2(edge.y(), -edge.x()).normalized();
      normals.push_back(n);
      offsets.push_back(n.dot(verts[k]));
    }
  }
  const double reach = 2.0 * body.max_radius() + c.norm() + 1.0;
  auto r_body = [&](double th) {
    const Vec2 u = unit(th);
    if (!normals.empty()) {
      double t = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < normals.size(); ++k) {
        const double nu = normals[k].dot(u);
        if (nu > 0.0) t = std::min(t, (offsets[k] - normals[k].dot(c)) / nu);
      }
      return t;
    }
    double lo = 0.0, hi = reach;
    for (int i = 0; i < 100 && hi - lo > 1e-15 * reach; ++i) {
      const double mid = 0.5 * (lo + hi);
      (inside_body(c + mid * u) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto r_ellipse = [&](double th) {
    const Vec2 u = unit(th);
    const double qa = u.dot(q * u), qb = u.dot(q * w), qc = w.dot(q * w) - 1.0;
    return (-qb + std::sqrt(qb * qb - qa * qc)) / qa;
  };
  auto diff = [&](double th) { return r_body(th) - r_ellipse(th); };
  std::vector<double> breaks;
  for (const Vec2& p : verts) breaks.push_back(wrap(std::atan2(p.y() - c.y(), p.x() - c.x()), kTwoPi));
  const int n = 1440;
  const double step = kTwoPi / n;
  double prev = diff(0.0);
  for (int k = 1; k <= n; ++k) {
    const double cur = diff(step * k);
    if ((prev >= 0.0) != (cur >= 0.0)) {
      double lo = step * (k - 1), hi = step * k;
      const bool lo_pos = prev >= 0.0;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((diff(mid) >= 0.0) == lo_pos ? lo : hi) = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return detail::integrate_split(
      [&](double th) {
        const double r = std::min(r_body(th), r_ellipse(th));
        return 0.5 * r * r;
      },
      0.0, kTwoPi, breaks);
}

DisplacedCenterReport displaced_center_check(const ConvexBody& body, double lambda, int grid,
                                             double max_offset) {
  if (grid < 3) throw Error(Errc::InvalidInput, "offset grid needs at least 3 points per axis");
  DisplacedCenterReport rep;
  rep.ellipse = mi_ellipse(body, lambda).ellipse;
  rep.cell = 2.0 * max_offset / (grid - 1);
  std::vector<Vec2> offsets;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 v(-max_offset + rep.cell * i, -max_offset + rep.cell * j);
      if (v.norm() <= max_offset * (1.0 + 1e-12)) offsets.push_back(v);
    }
  }
  std::vector<double> areas(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t k) {
    areas[k] = shifted_intersection_area(body, rep.ellipse, offsets[k]);
  });
  rep.center_area = shifted_intersection_area(body, rep.ellipse, Vec2::Zero());
  const auto best = std::max_element(areas.begin(), areas.end());
  rep.best_area = *best;
  rep.best_offset = offsets[static_cast<std::size_t>(best - areas.begin())];
  rep.evaluated = static_cast<int>(offsets.size());
  rep.max_at_origin = rep.best_offset.lpNorm<Eigen::Infinity>() <= rep.cell * (1.0 + 1e-9) &&
                      rep.best_area <= rep.center_area + 1e-6;
  return rep;
}

QuasiconcavityReport quasiconcavity_probe(const ConvexBody& body, const Mat2& frame, double t_min,
                                          double t_max, int steps, double tol) {
  if (steps < 3) throw Error(Errc::InvalidInput, "probe needs at least 3 steps");
  QuasiconcavityReport rep;
  const auto n = static_cast<std::size_t>(steps);
  rep.t.resize(n);
  rep.values.resize(n);
  rep.admissible.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const double t = t_min + (t_max - t_min) * static_cast<double>(k) / (steps - 1);
    Mat2 d = Mat2::Zero();
    d(0, 0) = std::exp(t);
    d(1, 1) = std::exp(-t);
    rep.t[k] = t;
    rep.values[k] = intersection_area(body, CenteredEllipse(frame.transpose() * d * frame));
  });
  const double cap = std::min(kPi, body.area()) - 1e-6;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k) {
    rep.admissible[k] = rep.values[k] < cap;
    if (rep.admissible[k]) idx.push_back(k);
  }
  rep.argmax = static_cast<int>(std::max_element(rep.values.begin(), rep.values.end()) -
                                rep.values.begin());
  const std::size_t m = idx.size();
  if (m >= 3) {
    std::vector<double> pre(m), suf(m);
    pre[0] = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < m; ++i) pre[i] = std::max(pre[i - 1], rep.values[idx[i - 1]]);
    suf[m - 1] = -std::numeric_limits<double>::infinity();
    for (std::size_t i = m - 1; i-- > 0;) suf[i] = std::max(suf[i + 1], rep.values[idx[i + 1]]);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (rep.values[idx[i]] <= std::min(pre[i], suf[i]) + tol) {
        rep.violations.push_back(static_cast<int>(idx[i]));
      }
    }
  }
  const auto peak = static_cast<std::size_t>(rep.argmax);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t j = idx[i], k = idx[i + 1];
    if (k <= peak && rep.values[k] < rep.values[j] - 1e-12) rep.unimodal = false;
    if (j >= peak && rep.values[k] > rep.values[j] + 1e-12) rep.unimodal = false;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!rep.admissible[k - 1] || !rep.admissible[k] || !rep.admissible[k + 1]) continue;
    const double mid = std::log(rep.values[k]);
    const double avg = 0.5 * (std::log(rep.values[k - 1]) + std::log(rep.values[k + 1]));
    if (mid < avg - 1e-12) rep.log_concavity_violations.push_back(static_cast<int>(k));
  }
  return rep;
}

}  // namespace mie
