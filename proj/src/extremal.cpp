#include "mi_ellipse/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "golden.hpp"
#include "mi_ellipse/error.hpp"

namespace mie {

namespace {

constexpr int kInitialSamples = 720;
constexpr int kCheckGrid = 2880;
constexpr int kMaxRefineRounds = 60;
constexpr double kActiveGap = 1e-12;
constexpr std::size_t kSeedCandidates = 24;
constexpr std::size_t kMaxPeaks = 16;
constexpr std::size_t kExchangeCandidates = 8;

using Radial = std::function<double(double)>;

// A radial function with its values cached on a uniform half-turn grid.
struct SampledRadial {
  SampledRadial(Radial fn, int n) : g(std::move(fn)), grid(n) {
    for (int k = 0; k < n; ++k) values.push_back(g(kPi * k / n));
  }
  double operator()(double th) const { return g(th); }
  Radial g;
  int grid;
  std::vector<double> values;
};

double quad(const Mat2& q, const Vec2& u) { return u.dot(q * u); }

// Extreme value of G(theta) u^T Q u over a half turn: grid, kinks, then a
// golden refinement around every local extremum of the grid. `peaks` gets
// the refined angles whose value passes `keep`.
double ratio_extreme(const SampledRadial& g, const Mat2& q, bool maximum,
                     const std::vector<double>& kinks, std::vector<double>* peaks = nullptr,
                     double keep = 1.0) {
  const double sign = maximum ? 1.0 : -1.0;
  auto f = [&](double th) { return sign * g(th) * quad(q, unit(th)); };
  const int grid = g.grid;
  const double step = kPi / grid;
  std::vector<double> v(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const auto i = static_cast<std::size_t>(k);
    v[i] = sign * g.values[i] * quad(q, unit(step * k));
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, int>> local;
  for (int k = 0; k < grid; ++k) {
    const double a = v[static_cast<std::size_t>((k + grid - 1) % grid)];
    const double b = v[static_cast<std::size_t>(k)];
    const double c = v[static_cast<std::size_t>((k + 1) % grid)];
    best = std::max(best, b);
    if (b > a && b >= c) local.emplace_back(b, k);
  }
  // A flat ratio (the body is itself an ellipse) has no isolated peaks worth
  // refining; otherwise refine the highest few.
  std::sort(local.begin(), local.end(), std::greater<>());
  if (local.size() > kMaxPeaks) local.resize(kMaxPeaks);
  for (auto [b, k] : local) {
    const double th = detail::golden_max(f, step * (k - 1), step * (k + 1), 80);
    const double val = std::max(f(th), b);
    best = std::max(best, val);
    if (peaks && sign * val > keep) peaks->push_back(f(th) >= b ? th : step * k);
  }
  for (double th : kinks) {
    const double val = f(th);
    best = std::max(best, val);
    if (peaks && sign * val > keep) peaks->push_back(th);
  }
  return sign * best;
}

Mat2 scale_to_contact(const Mat2& q, double ratio) { return q * (1.0 / ratio); }

// Exact minimum-area centred ellipse of a small point set. The optimum
// touches at most three points (up to sign), so it is the smallest-area
// ellipse through one pair or one triple that contains every other point.
MveeResult mvee_enumerate(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size();
  double best_det = 0.0;
  MveeResult best;
  auto consider = [&](const Mat2& q, const std::vector<std::pair<std::size_t, double>>& w) {
    const double det = q.determinant();
    if (!(q(0, 0) > 0.0) || !(det > best_det)) return;
    double worst = 0.0;
    for (const Vec2& p : pts) worst = std::max(worst, quad(q, p));
    if (worst > 1.0 + 1e-13) return;
    best_det = det;
    best.form = q;
    best.weights.assign(m, 0.0);
    for (auto [i, v] : w) best.weights[i] = v;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      Mat2 p;
      p.col(0) = pts[i];
      p.col(1) = pts[j];
      if (std::abs(p.determinant()) < 1e-14 * pts[i].squaredNorm() * pts[j].squaredNorm()) continue;
      consider((p * p.transpose()).inverse(), {{i, 0.5}, {j, 0.5}});
      for (std::size_t k = j + 1; k < m; ++k) {
        Eigen::Matrix3d a;
        for (int r = 0; r < 3; ++r) {
          const Vec2& v = pts[r == 0 ? i : r == 1 ? j : k];
          a(r, 0) = v.x() * v.x();
          a(r, 1) = 2.0 * v.x() * v.y();
          a(r, 2) = v.y() * v.y();
        }
        const auto lu = a.fullPivLu();
        if (!lu.isInvertible()) continue;
        const Eigen::Vector3d c = lu.solve(Eigen::Vector3d::Ones());
        Mat2 q;
        q << c(0), c(1), c(1), c(2);
        if (!(q.determinant() > 0.0)) continue;
        // Multipliers: Q^{-1} = sum lambda p p^T, lambda = 2 u.
        const Mat2 qi = q.inverse();
        const Eigen::Vector3d rhs(qi(0, 0), 0.5 * qi(0, 1) + 0.5 * qi(1, 0), qi(1, 1));
        Eigen::Matrix3d b;
        for (int r = 0; r < 3; ++r) {
          const Vec2& v = pts[r == 0 ? i : r == 1 ? j : k];
          b(0, r) = v.x() * v.x();
          b(1, r) = v.x() * v.y();
          b(2, r) = v.y() * v.y();
        }
        const Eigen::Vector3d lam = b.fullPivLu().solve(rhs);
        if (lam.minCoeff() < -1e-12) continue;
        consider(q, {{i, 0.5 * lam(0)}, {j, 0.5 * lam(1)}, {k, 0.5 * lam(2)}});
      }
    }
  }
  if (best_det <= 0.0) throw Error(Errc::NoConvergence, "no enclosing ellipse among active sets");
  return best;
}

// Minimal centred ellipse containing the region {r^2 <= g}. A coarse
// multiplicative solve on candidate points locates the contact regions;
// an exchange loop then solves exactly on the active points plus the
// current worst violators until nothing sticks out.
MveeResult circumscribe(const SampledRadial& g, const std::vector<Vec2>& exact,
                        const std::vector<double>& kinks, double tol) {
  std::vector<Vec2> seed = exact;
  if (seed.empty()) {
    const int stride = std::max(1, g.grid / kInitialSamples);
    for (int k = 0; k < g.grid; k += stride) {
      const double th = kPi * k / g.grid;
      seed.push_back(std::sqrt(g.values[static_cast<std::size_t>(k)]) * unit(th));
    }
  }
  MveeResult r = mvee(seed, 1e-3);
  int total = r.iterations;

  // Candidates ranked by how far they stick out of the current ellipse.
  auto violators = [&](const Mat2& q, double above, std::size_t cap) {
    std::vector<std::pair<double, Vec2>> cand;
    if (!exact.empty()) {
      for (const Vec2& p : exact) {
        const double v = quad(q, p);
        if (v > above) cand.emplace_back(v, p);
      }
    } else {
      std::vector<double> peaks;
      ratio_extreme(g, q, true, kinks, &peaks, -1.0);
      for (double th : peaks) {
        const Vec2 p = std::sqrt(g(th)) * unit(th);
        const double v = quad(q, p);
        if (v > above) cand.emplace_back(v, p);
      }
    }
    std::sort(cand.begin(), cand.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    if (cand.size() > cap) cand.resize(cap);
    std::vector<Vec2> out;
    for (const auto& c : cand) out.push_back(c.second);
    return out;
  };

  std::vector<Vec2> work = violators(r.form, 0.9, kSeedCandidates);
  double top = 0.0;
  for (int round = 0; round < kMaxRefineRounds; ++round) {
    r = mvee_enumerate(work);
    ++total;
    top = ratio_extreme(g, r.form, true, kinks);
    const std::vector<Vec2> extra = violators(r.form, 1.0 + kActiveGap, kExchangeCandidates);
    if (extra.empty() || top <= 1.0 + 0.01 * tol) break;
    std::vector<Vec2> next;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (r.weights[i] > 0.0) next.push_back(work[i]);
    }
    next.insert(next.end(), extra.begin(), extra.end());
    work = std::move(next);
  }
  r.form = scale_to_contact(r.form, top);
  r.gap = top - 1.0;
  r.iterations = total;
  return r;
}

// Support function with a dense boundary sample and local refinement.
class SupportOracle {
 public:
  explicit SupportOracle(const ConvexBody& body) : body_(body) {
    if (body.kind() == ConvexBody::Kind::Polygon) {
      pts_ = body.vertices();
      exact_ = true;
    } else {
      for (int k = 0; k < kSamples; ++k) pts_.push_back(body.boundary_point(kTwoPi * k / kSamples));
    }
  }

  double operator()(double theta) const {
    const Vec2 u = unit(theta);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const double d = pts_[i].dot(u);
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    if (exact_) return best;
    const double step = kTwoPi / kSamples;
    const double c = step * static_cast<double>(arg);
    auto f = [&](double th) { return body_.boundary_point(th).dot(u); };
    return std::max(best, f(detail::golden_max(f, c - step, c + step, 80)));
  }

 private:
  static constexpr int kSamples = 5760;
  const ConvexBody& body_;
  std::vector<Vec2> pts_;
  bool exact_ = false;
};

}  // namespace

MveeResult mvee(std::span<const Vec2> points, double tol, int max_iterations) {
  const std::size_t m = points.size();
  if (m < 2) throw Error(Errc::InvalidInput, "need at least two points");
  Mat2 scatter = Mat2::Zero();
  for (const Vec2& p : points) scatter += p * p.transpose();
  if (!(scatter.determinant() > 1e-300)) {
    throw Error(Errc::InvalidInput, "points do not span the plane");
  }
  const double d = 2.0;
  std::vector<double> u(m, 1.0 / static_cast<double>(m));
  std::vector<double> kappa(m);
  MveeResult r;
  for (int it = 0;; ++it) {
    Mat2 mm = Mat2::Zero();
    for (std::size_t i = 0; i < m; ++i) mm += u[i] * points[i] * points[i].transpose();
    const Mat2 inv = mm.inverse();
    std::size_t up = 0, down = m;
    for (std::size_t i = 0; i < m; ++i) {
      kappa[i] = points[i].dot(inv * points[i]);
      if (kappa[i] > kappa[up]) up = i;
      if (u[i] > 0.0 && (down == m || kappa[i] < kappa[down])) down = i;
    }
    const double gap = kappa[up] / d - 1.0;
    if (gap <= tol || it >= max_iterations) {
      if (gap > tol) {
        std::ostringstream msg;
        msg << "minimum-volume ellipse gap " << gap << " after " << it << " iterations";
        throw Error(Errc::IterationLimit, msg.str());
      }
      r.form = inv / (d * (1.0 + gap));
      r.gap = gap;
      r.iterations = it;
      r.weights = u;
      return r;
    }
    const double grow = kappa[up] - d;
    const double shrink = down < m ? d - kappa[down] : 0.0;
    if (grow >= shrink) {
      const double beta = grow / (d * (kappa[up] - 1.0));
      for (double& w : u) w *= 1.0 - beta;
      u[up] += beta;
    } else {
      // Away step: move weight off the least useful support point.
      const double k = kappa[down];
      const double floor = -u[down] / (1.0 - u[down]);
      const double beta = k > 1.0 ? std::max(floor, (k - d) / (d * (k - 1.0))) : floor;
      for (double& w : u) w *= 1.0 - beta;
      u[down] += beta;
      if (beta == floor) u[down] = 0.0;
    }
  }
}

double support(const ConvexBody& body, double theta) { return SupportOracle(body)(theta); }

double containment_ratio_max(const ConvexBody& body, const CenteredEllipse& e, int grid) {
  const SampledRadial g([&](double th) { return body.radial(th); }, grid);
  return ratio_extreme(g, e.form(), true, body.kinks());
}

double containment_ratio_min(const ConvexBody& body, const CenteredEllipse& e, int grid) {
  const SampledRadial g([&](double th) { return body.radial(th); }, grid);
  return ratio_extreme(g, e.form(), false, body.kinks());
}

ExtremalResult loewner_ellipse(const ConvexBody& body, double tol) {
  std::vector<Vec2> exact;
  if (body.kind() == ConvexBody::Kind::Polygon) exact = body.vertices();
  const SampledRadial g([&](double th) { return body.radial(th); }, kCheckGrid);
  const MveeResult r = circumscribe(g, exact, body.kinks(), tol);
  return {CenteredEllipse(r.form), ExtremalKind::Loewner, r.gap, r.iterations};
}

ExtremalResult john_ellipse(const ConvexBody& body, double tol) {
  std::vector<Vec2> exact;
  std::vector<double> polar_kinks;
  if (body.kind() == ConvexBody::Kind::Polygon) {
    const std::vector<Vec2> v = body.vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Vec2 e = v[(k + 1) % v.size()] - v[k];
      const Vec2 n = Vec2(e.y(), -e.x()).normalized();
      const Vec2 p = n / n.dot(v[k]);
      exact.push_back(p);
      polar_kinks.push_back(wrap(std::atan2(p.y(), p.x()), kPi));
    }
  }
  const SupportOracle h(body);
  const SampledRadial polar(
      [&](double th) {
        const double s = h(th);
        return 1.0 / (s * s);
      },
      kCheckGrid);
  const MveeResult r = circumscribe(polar, exact, polar_kinks, tol);
  const Mat2 q = r.form.inverse();
  const SampledRadial g([&](double th) { return body.radial(th); }, kCheckGrid);
  const double low = ratio_extreme(g, q, false, body.kinks());
  return {CenteredEllipse(scale_to_contact(q, low)), ExtremalKind::John, r.gap, r.iterations};
}

}  // namespace mie
