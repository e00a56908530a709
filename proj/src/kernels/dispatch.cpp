#include <cstdlib>
#include <cstring>

#include "mi_ellipse/kernels.hpp"

namespace mie::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#if defined(MI_ELLIPSE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable* table = [] {
    const char* forced = std::getenv("MI_ELLIPSE_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }();
  return *table;
}

double max_dot(std::span<const double> x, std::span<const double> y, double ux, double uy) {
  return active().max_dot(x.data(), y.data(), x.size(), ux, uy);
}

void mask_quadric(std::span<const double> x, std::span<const double> y, double q00, double q01,
                  double q11, std::span<std::uint8_t> mask) {
  active().mask_quadric(x.data(), y.data(), x.size(), q00, q01, q11, mask.data());
}

void mask_halfplanes(std::span<const double> x, std::span<const double> y,
                     std::span<const double> nx, std::span<const double> ny,
                     std::span<const double> h, std::span<std::uint8_t> mask) {
  active().mask_halfplanes(x.data(), y.data(), x.size(), nx.data(), ny.data(), h.data(), h.size(),
                           mask.data());
}

void mask_even_quartic(std::span<const double> x, std::span<const double> y,
                       const std::array<double, 8>& coeffs, double r2max,
                       std::span<std::uint8_t> mask) {
  active().mask_even_quartic(x.data(), y.data(), x.size(), coeffs.data(), r2max, mask.data());
}

std::size_t count_mask(std::span<const std::uint8_t> mask) {
  return active().count_mask(mask.data(), mask.size());
}

}  // namespace mie::kernels
