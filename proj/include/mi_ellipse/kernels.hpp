#pragma once

// Data-parallel inner loops with a scalar reference implementation and SIMD
// variants chosen once at runtime. Every variant must produce bit-identical
// results to the scalar reference (no FMA, same operation order).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace mie::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // max_i (x_i * ux + y_i * uy); -inf for n == 0.
  double (*max_dot)(const double* x, const double* y, std::size_t n, double ux, double uy);
  // mask_i &= [q00 x^2 + 2 q01 x y + q11 y^2 <= 1]
  void (*mask_quadric)(const double* x, const double* y, std::size_t n, double q00, double q01,
                       double q11, std::uint8_t* mask);
  // mask_i &= [for all j: nx_j x + ny_j y <= h_j]
  void (*mask_halfplanes)(const double* x, const double* y, std::size_t n, const double* nx,
                          const double* ny, const double* h, std::size_t m, std::uint8_t* mask);
  // mask_i &= [p(x, y) <= 1 and x^2 + y^2 <= r2max], p an even quartic with
  // coefficients (x2, xy, y2, x4, x3y, x2y2, xy3, y4).
  void (*mask_even_quartic)(const double* x, const double* y, std::size_t n, const double* coeffs,
                            double r2max, std::uint8_t* mask);
  std::size_t (*count_mask)(const std::uint8_t* mask, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;

// The table used by the library. Chosen on first use: the best supported ISA,
// unless MI_ELLIPSE_SIMD=scalar is set in the environment.
const KernelTable& active() noexcept;

// Span-based conveniences over active().
double max_dot(std::span<const double> x, std::span<const double> y, double ux, double uy);
void mask_quadric(std::span<const double> x, std::span<const double> y, double q00, double q01,
                  double q11, std::span<std::uint8_t> mask);
void mask_halfplanes(std::span<const double> x, std::span<const double> y,
                     std::span<const double> nx, std::span<const double> ny,
                     std::span<const double> h, std::span<std::uint8_t> mask);
void mask_even_quartic(std::span<const double> x, std::span<const double> y,
                       const std::array<double, 8>& coeffs, double r2max,
                       std::span<std::uint8_t> mask);
std::size_t count_mask(std::span<const std::uint8_t> mask);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(MI_ELLIPSE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace mie::kernels
