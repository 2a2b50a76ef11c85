// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace twosex::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    __m256d y0 = _mm256_loadu_pd(y + k);
    __m256d y1 = _mm256_loadu_pd(y + k + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k + 4), y1);
    _mm256_storeu_pd(y + k, y0);
    _mm256_storeu_pd(y + k + 4, y1);
  }
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

void matvec(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
            const double* x, double* y) {
  // Four rows at a time share each load of x.
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* a0 = a + r * stride;
    const double* a1 = a0 + stride;
    const double* a2 = a1 + stride;
    const double* a3 = a2 + stride;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= cols; k += 4) {
      const __m256d xv = _mm256_loadu_pd(x + k);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + k), xv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + k), xv, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + k), xv, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + k), xv, s3);
    }
    double t0 = hsum(s0), t1 = hsum(s1), t2 = hsum(s2), t3 = hsum(s3);
    for (; k < cols; ++k) {
      t0 += a0[k] * x[k];
      t1 += a1[k] * x[k];
      t2 += a2[k] * x[k];
      t3 += a3[k] * x[k];
    }
    y[r] = t0;
    y[r + 1] = t1;
    y[r + 2] = t2;
    y[r + 3] = t3;
  }
  for (; r < rows; ++r) y[r] = dot(a + r * stride, x, cols);
}

}  // namespace twosex::kernels::avx2
