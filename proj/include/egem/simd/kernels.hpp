#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the clustering code. Every kernel has a
// scalar reference implementation; vector variants are selected once at
// runtime from the CPU features and must agree with the reference to rounding.

namespace egem::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  /// sum_i |a_i - b_i|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
  /// sum_i a_i b_i
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// sum_i w_i exp(-0.5 ((y - c_i) * inv_h)^2); the unnormalised Gaussian KDE at y.
  double (*gaussian_sum)(const double* centers, const double* weights, std::size_t n, double y,
                         double inv_h);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// The table chosen at first use. ELLIPSE_GEM_SIMD=scalar|avx2|neon overrides
/// auto-detection (an unavailable request falls back to scalar).
const KernelTable& kernels() noexcept;

}  // namespace egem::simd
