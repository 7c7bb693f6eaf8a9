// AArch64 variants. Advanced SIMD is mandatory on AArch64, so no runtime probe.

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace egem::simd::detail {

double l1_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vabdq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// The exponent is evaluated per lane; the argument arithmetic and the weighted
// accumulation are vectorised.
double gaussian_sum_neon(const double* centers, const double* weights, std::size_t n, double y,
                         double inv_h) {
  const float64x2_t vy = vdupq_n_f64(y);
  const float64x2_t vinv = vdupq_n_f64(inv_h);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t z = vmulq_f64(vsubq_f64(vy, vld1q_f64(centers + i)), vinv);
    const float64x2_t arg = vmulq_f64(vdupq_n_f64(-0.5), vmulq_f64(z, z));
    const double e[2] = {std::exp(vgetq_lane_f64(arg, 0)), std::exp(vgetq_lane_f64(arg, 1))};
    acc = vfmaq_f64(acc, vld1q_f64(weights + i), vld1q_f64(e));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double z = (y - centers[i]) * inv_h;
    s += weights[i] * std::exp(-0.5 * z * z);
  }
  return s;
}

}  // namespace egem::simd::detail
