#include "mi_ellipse/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace mie::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline void and_mask4(std::uint8_t* mask, int bits) {
  mask[0] &= static_cast<std::uint8_t>(bits & 1);
  mask[1] &= static_cast<std::uint8_t>((bits >> 1) & 1);
  mask[2] &= static_cast<std::uint8_t>((bits >> 2) & 1);
  mask[3] &= static_cast<std::uint8_t>((bits >> 3) & 1);
}

double max_dot(const double* x, const double* y, std::size_t n, double ux, double uy) {
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vuy = _mm256_set1_pd(uy);
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(x + i), vux),
                                    _mm256_mul_pd(_mm256_loadu_pd(y + i), vuy));
    best = _mm256_max_pd(best, v);
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, best);
  double out = lanes[0];
  for (std::size_t k = 1; k < kLanes; ++k) out = lanes[k] > out ? lanes[k] : out;
  for (; i < n; ++i) {
    const double v = x[i] * ux + y[i] * uy;
    if (v > out) out = v;
  }
  return out;
}

void mask_quadric(const double* x, const double* y, std::size_t n, double q00, double q01,
                  double q11, std::uint8_t* mask) {
  const double two_q01 = 2.0 * q01;
  const __m256d a = _mm256_set1_pd(q00);
  const __m256d b = _mm256_set1_pd(two_q01);
  const __m256d d = _mm256_set1_pd(q11);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d t0 = _mm256_mul_pd(_mm256_mul_pd(a, vx), vx);
    const __m256d t1 = _mm256_mul_pd(_mm256_mul_pd(b, vx), vy);
    const __m256d t2 = _mm256_mul_pd(_mm256_mul_pd(d, vy), vy);
    const __m256d v = _mm256_add_pd(_mm256_add_pd(t0, t1), t2);
    and_mask4(mask + i, _mm256_movemask_pd(_mm256_cmp_pd(v, one, _CMP_LE_OQ)));
  }
  for (; i < n; ++i) {
    const double v = (q00 * x[i]) * x[i] + (two_q01 * x[i]) * y[i] + (q11 * y[i]) * y[i];
    mask[i] &= static_cast<std::uint8_t>(v <= 1.0);
  }
}

void mask_halfplanes(const double* x, const double* y, std::size_t n, const double* nx,
                     const double* ny, const double* h, std::size_t m, std::uint8_t* mask) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    int bits = 0xF;
    for (std::size_t j = 0; j < m && bits != 0; ++j) {
      const __m256d v = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(nx[j]), vx),
                                      _mm256_mul_pd(_mm256_set1_pd(ny[j]), vy));
      bits &= _mm256_movemask_pd(_mm256_cmp_pd(v, _mm256_set1_pd(h[j]), _CMP_LE_OQ));
    }
    and_mask4(mask + i, bits);
  }
  for (; i < n; ++i) {
    std::uint8_t inside = 1;
    for (std::size_t j = 0; j < m; ++j) {
      inside &= static_cast<std::uint8_t>(nx[j] * x[i] + ny[j] * y[i] <= h[j]);
    }
    mask[i] &= inside;
  }
}

void mask_even_quartic(const double* x, const double* y, std::size_t n, const double* c,
                       double r2max, std::uint8_t* mask) {
  __m256d vc[8];
  for (int k = 0; k < 8; ++k) vc[k] = _mm256_set1_pd(c[k]);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d rmax = _mm256_set1_pd(r2max);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d xx = _mm256_mul_pd(vx, vx);
    const __m256d yy = _mm256_mul_pd(vy, vy);
    const __m256d xy = _mm256_mul_pd(vx, vy);
    __m256d q2 = _mm256_mul_pd(vc[0], xx);
    q2 = _mm256_add_pd(q2, _mm256_mul_pd(vc[1], xy));
    q2 = _mm256_add_pd(q2, _mm256_mul_pd(vc[2], yy));
    __m256d q4 = _mm256_mul_pd(vc[3], _mm256_mul_pd(xx, xx));
    q4 = _mm256_add_pd(q4, _mm256_mul_pd(vc[4], _mm256_mul_pd(xx, xy)));
    q4 = _mm256_add_pd(q4, _mm256_mul_pd(vc[5], _mm256_mul_pd(xx, yy)));
    q4 = _mm256_add_pd(q4, _mm256_mul_pd(vc[6], _mm256_mul_pd(xy, yy)));
    q4 = _mm256_add_pd(q4, _mm256_mul_pd(vc[7], _mm256_mul_pd(yy, yy)));
    const __m256d p = _mm256_add_pd(q2, q4);
    const __m256d in_p = _mm256_cmp_pd(p, one, _CMP_LE_OQ);
    const __m256d in_r = _mm256_cmp_pd(_mm256_add_pd(xx, yy), rmax, _CMP_LE_OQ);
    and_mask4(mask + i, _mm256_movemask_pd(_mm256_and_pd(in_p, in_r)));
  }
  for (; i < n; ++i) {
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
  std::size_t i = 0;
  std::size_t total = 0;
  const __m256i zero = _mm256_setzero_si256();
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
    const __m256i sums = _mm256_sad_epu8(v, zero);
    alignas(32) std::uint64_t parts[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(parts), sums);
    total += parts[0] + parts[1] + parts[2] + parts[3];
  }
  for (; i < n; ++i) total += mask[i];
  return total;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::Avx2, max_dot, mask_quadric, mask_halfplanes, mask_even_quartic,
                             count_mask};
}  // namespace detail

}  // namespace mie::kernels
