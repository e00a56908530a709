#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace mie::detail {

inline constexpr double kQuadratureTol = 1e-14;
inline constexpr int kQuadraturePanels = 4000;

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One Gauss-Kronrod (7/15) panel. The rule is applied on [-1, 1] so the
// error estimate Boost reports is in the same units as the value.
template <class F>
Panel gk_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double x) { return half * f(mid + half * x); };
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, 0, 0.0, &err, &l1);
  return {a, b, v, err, l1};
}

// Globally adaptive Gauss-Kronrod on [a, b]: keep splitting the panel with the
// largest error estimate until the total drops below tol * L1 or every
// remaining panel is at rounding level.
template <class F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<Panel> open;
  std::vector<Panel> done;
  double value = 0.0, error = 0.0, l1 = 0.0;
  auto push = [&](const Panel& p) {
    value += p.value;
    error += p.error;
    l1 += p.l1;
    if (p.error <= 50.0 * eps * p.l1 || p.b - p.a <= 64.0 * eps * std::max(1.0, std::abs(p.a))) {
      done.push_back(p);
    } else {
      open.push(p);
    }
  };
  push(gk_panel(f, a, b));
  int panels = 1;
  while (!open.empty() && error > kQuadratureTol * l1 && panels < kQuadraturePanels) {
    const Panel p = open.top();
    open.pop();
    value -= p.value;
    error -= p.error;
    l1 -= p.l1;
    const double m = 0.5 * (p.a + p.b);
    push(gk_panel(f, p.a, m));
    push(gk_panel(f, m, p.b));
    ++panels;
  }
  // Re-add in a fixed order so the result does not depend on heap layout.
  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double total = 0.0;
  for (const Panel& p : done) total += p.value;
  return total;
}

// Integral over [a, b] split at every breakpoint that falls strictly inside.
template <class F>
double integrate_split(F&& f, double a, double b, std::span<const double> breaks) {
  std::vector<double> cuts;
  cuts.reserve(breaks.size() + 2);
  cuts.push_back(a);
  for (double x : breaks) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > 0.0) total += integrate(f, cuts[i], cuts[i + 1]);
  }
  return total;
}

}  // namespace mie::detail
