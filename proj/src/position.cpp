#include "mi_ellipse/position.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/variation.hpp"

namespace mie {

namespace {

double circle_distance(double a, double b) {
  const double d = wrap(a - b, kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

double rotation_invariance_error(const CrossingSet& cs, double phi) {
  double worst = 0.0;
  for (const Crossing& c : cs.crossings) {
    double nearest = kPi;
    for (const Crossing& o : cs.crossings) {
      if (o.parity == c.parity) nearest = std::min(nearest, circle_distance(c.xi + phi, o.xi));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

PositionReport check_mi_position(const ConvexBody& body, double tol) {
  PositionReport r;
  r.crossings = find_unit_crossings(body);
  r.residual = std::abs(residual_d(r.crossings));
  r.is_mi = r.residual <= tol && r.crossings.crossings.size() != 4;
  if (r.crossings.crossings.size() == 8) {
    r.quarter_turn_checked = true;
    r.quarter_turn_error = rotation_invariance_error(r.crossings, kPi / 2.0);
    r.quarter_turn_invariant = r.quarter_turn_error <= tol;
    r.is_mi = r.is_mi && r.quarter_turn_invariant;
  }
  return r;
}

void measure_residuals(IsotropicMeasure& m) {
  Vec2 mean = Vec2::Zero();
  for (std::size_t j = 0; j < m.support.size(); ++j) mean += m.weights[j] * m.support[j];
  m.balance_residual = mean.norm();
  m.isotropy_residual = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Vec2 v = unit(kPi * k / 16.0);
    double s = 0.0;
    for (std::size_t j = 0; j < m.support.size(); ++j) {
      const double d = m.support[j].dot(v);
      s += m.weights[j] * d * d;
    }
    m.isotropy_residual = std::max(m.isotropy_residual, std::abs(s - 0.5 * v.squaredNorm()));
  }
}

IsotropicMeasure isotropic_weights(const CrossingSet& cs, double tol) {
  const double residual = std::abs(residual_d(cs));
  if (residual > tol || cs.crossings.size() < 8) {
    std::ostringstream msg;
    msg << "crossings are not stationary: |D| = " << residual << ", " << cs.crossings.size()
        << " crossings";
    throw Error(Errc::NotStationary, msg.str());
  }
  const std::size_t half = cs.crossings.size() / 2;
  std::vector<Vec2> w(half);
  Vec2 total = Vec2::Zero();
  for (std::size_t j = 0; j < half; ++j) {
    w[j] = unit(2.0 * cs.crossings[j].xi);
    total += w[j];
  }
  std::vector<double> q(half, 0.0);
  if (total.norm() <= 1e-12 * static_cast<double>(half)) {
    std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(half));
  } else {
    // Express 0 as a convex combination of at most three of the squares,
    // keeping the most interior triangle.
    double best = -1.0;
    auto cross = [](const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); };
    for (std::size_t i = 0; i < half; ++i) {
      for (std::size_t j = i + 1; j < half; ++j) {
        // Origin on a chord of antipodal squares.
        if ((w[i] + w[j]).norm() <= 1e-12 && best < 0.0) {
          std::fill(q.begin(), q.end(), 0.0);
          q[i] = q[j] = 0.5;
          best = 0.0;
        }
        for (std::size_t k = j + 1; k < half; ++k) {
          const double area = cross(w[j] - w[i], w[k] - w[i]);
          if (std::abs(area) < 1e-14) continue;
          const double bi = cross(w[j], w[k]) / area;
          const double bj = cross(w[k], w[i]) / area;
          const double bk = cross(w[i], w[j]) / area;
          const double low = std::min({bi, bj, bk});
          if (low >= -1e-12 && low > best) {
            best = low;
            std::fill(q.begin(), q.end(), 0.0);
            q[i] = std::max(bi, 0.0);
            q[j] = std::max(bj, 0.0);
            q[k] = std::max(bk, 0.0);
          }
        }
      }
    }
    if (best < 0.0) throw Error(Errc::InfeasibleHull, "origin is outside the hull of the squares");
    double s = 0.0;
    for (double v : q) s += v;
    for (double& v : q) v /= s;
  }
  IsotropicMeasure m;
  for (std::size_t j = 0; j < cs.crossings.size(); ++j) {
    m.support.push_back(unit(cs.crossings[j].xi));
    m.weights.push_back(0.5 * q[j % half]);
  }
  measure_residuals(m);
  return m;
}

ConverseReport converse_counterexample_check(double eps) {
  if (!(eps > 0.0 && eps < kPi / 4.0)) throw Error(Errc::InvalidInput, "eps must lie in (0, pi/4)");
  ConverseReport r;
  r.eps = eps;
  const double q = kPi / 2.0;
  r.crossings = CrossingSet::from_half_turn({0.0, eps, q - eps, q, q + eps, 2.0 * q - eps},
                                            std::vector<double>(6, kPi / 4.0));
  for (std::size_t j = 0; j < r.crossings.crossings.size(); ++j) {
    const std::complex<double> z2 = std::polar(1.0, 2.0 * r.crossings.crossings[j].xi);
    (j % 2 == 0 ? r.odd_sum : r.even_sum) += z2;
  }
  r.D = residual_d(r.crossings);
  for (const Crossing& c : r.crossings.crossings) {
    r.uniform.support.push_back(unit(c.xi));
    r.uniform.weights.push_back(1.0 / static_cast<double>(r.crossings.crossings.size()));
  }
  measure_residuals(r.uniform);
  r.isotropic = r.uniform.balance_residual <= 1e-12 && r.uniform.isotropy_residual <= 1e-12;
  r.stationary = std::abs(r.D) <= 1e-12;
  return r;
}

}  // namespace mie
