#pragma once

#include <cmath>

namespace mie::detail {

// Minimizer of f on [a, b] by golden-section search.
template <class F>
double golden_min(const F& f, double a, double b, int iterations = 100) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && b - a > 1e-16; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

template <class F>
double golden_max(const F& f, double a, double b, int iterations = 100) {
  return golden_min([&](double x) { return -f(x); }, a, b, iterations);
}

}  // namespace mie::detail
