#pragma once

#include "egem/simd/kernels.hpp"

namespace egem::simd::detail {

double l1_distance_scalar(const double* a, const double* b, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double gaussian_sum_scalar(const double* centers, const double* weights, std::size_t n, double y,
                           double inv_h);

#if defined(EGEM_HAVE_AVX2)
double l1_distance_avx2(const double* a, const double* b, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double gaussian_sum_avx2(const double* centers, const double* weights, std::size_t n, double y,
                         double inv_h);
#endif

#if defined(EGEM_HAVE_NEON)
double l1_distance_neon(const double* a, const double* b, std::size_t n);
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
double gaussian_sum_neon(const double* centers, const double* weights, std::size_t n, double y,
                         double inv_h);
#endif

}  // namespace egem::simd::detail
