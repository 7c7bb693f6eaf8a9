#include <cmath>

#include "kernels_internal.hpp"

namespace egem::simd::detail {

double l1_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double gaussian_sum_scalar(const double* centers, const double* weights, std::size_t n, double y,
                           double inv_h) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (y - centers[i]) * inv_h;
    s += weights[i] * std::exp(-0.5 * z * z);
  }
  return s;
}

}  // namespace egem::simd::detail
