#include <cstddef>

#include "cfrsense/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace cfrsense::kernels {
namespace {

inline double hsum(__m256d acc0, __m256d acc1) {
  // (l0+l4, l1+l5, l2+l6, l3+l7) -> (v0+v2) + (v1+v3), matching the scalar
  // reference exactly.
  const __m256d v = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);  // (v0+v2, v1+v3)
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double sum = hsum(acc0, acc1);
  for (; i < n; ++i) sum = std::fma(a[i], b[i], sum);
  return sum;
}

double sqdist_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double sum = hsum(acc0, acc1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum = std::fma(d, d, sum);
  }
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void matmul_nt_avx2(const double* A, const double* B, double* C, std::size_t m,
                    std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) C[i * n + j] = dot_avx2(A + i * k, B + j * k, k);
}

const Ops avx2_impl{"avx2", dot_avx2, sqdist_avx2, axpy_avx2, matmul_nt_avx2};

}  // namespace

const Ops* avx2_ops_impl() { return &avx2_impl; }

}  // namespace cfrsense::kernels

#else  // non-x86 build: no AVX2 variant.

namespace cfrsense::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace cfrsense::kernels

#endif
