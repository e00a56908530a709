#include "mi_ellipse/kernels.hpp"

#include <limits>

namespace mie::kernels {
namespace {

double max_dot(const double* x, const double* y, std::size_t n, double ux, double uy) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i] * ux + y[i] * uy;
    if (v > best) best = v;
  }
  return best;
}

void mask_quadric(const double* x, const double* y, std::size_t n, double q00, double q01,
                  double q11, std::uint8_t* mask) {
  const double two_q01 = 2.0 * q01;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (q00 * x[i]) * x[i] + (two_q01 * x[i]) * y[i] + (q11 * y[i]) * y[i];
    mask[i] &= static_cast<std::uint8_t>(v <= 1.0);
  }
}

void mask_halfplanes(const double* x, const double* y, std::size_t n, const double* nx,
                     const double* ny, const double* h, std::size_t m, std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t inside = 1;
    for (std::size_t j = 0; j < m; ++j) {
      inside &= static_cast<std::uint8_t>(nx[j] * x[i] + ny[j] * y[i] <= h[j]);
    }
    mask[i] &= inside;
  }
}

void mask_even_quartic(const double* x, const double* y, std::size_t n, const double* c,
                       double r2max, std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xx = x[i] * x[i];
    const double yy = y[i] * y[i];
    const double xy = x[i] * y[i];
    const double q2 = c[0] * xx + c[1] * xy + c[2] * yy;
    const double q4 = c[3] * (xx * xx) + c[4] * (xx * xy) + c[5] * (xx * yy) + c[6] * (xy * yy) +
                      c[7] * (yy * yy);
    const double p = q2 + q4;
    mask[i] &= static_cast<std::uint8_t>((p <= 1.0) & (xx + yy <= r2max));
  }
}

std::size_t count_mask(const std::uint8_t* mask, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += mask[i];
  return c;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, max_dot, mask_quadric, mask_halfplanes,
                               mask_even_quartic, count_mask};
}  // namespace detail

}  // namespace mie::kernels
