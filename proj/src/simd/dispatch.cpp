#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace egem::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::Scalar, detail::l1_distance_scalar, detail::dot_scalar,
                                 detail::axpy_scalar, detail::gaussian_sum_scalar};
  return table;
}

const KernelTable* avx2_kernels() noexcept {
#if defined(EGEM_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{Isa::Avx2, detail::l1_distance_avx2, detail::dot_avx2,
                                 detail::axpy_avx2, detail::gaussian_sum_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(EGEM_HAVE_NEON)
  static const KernelTable table{Isa::Neon, detail::l1_distance_neon, detail::dot_neon,
                                 detail::axpy_neon, detail::gaussian_sum_neon};
  return &table;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  std::string_view request = "auto";
  if (const char* env = std::getenv("ELLIPSE_GEM_SIMD")) request = env;
  if (request == "scalar") return scalar_kernels();
  if (request == "avx2") return avx2_kernels() ? *avx2_kernels() : scalar_kernels();
  if (request == "neon") return neon_kernels() ? *neon_kernels() : scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() noexcept {
  static const KernelTable& active = select();
  return active;
}

}  // namespace egem::simd
