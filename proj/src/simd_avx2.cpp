// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher
// has confirmed CPU support.
#include "nslab/simd.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace nslab::simd {

namespace {

inline double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

void angle_deviation_avx2(int dims, std::size_t count, const double* v, const double* t,
                          double* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d vt = zero, vv = zero, tt = zero;
    for (int d = 0; d < dims; ++d) {
      const __m256d a = _mm256_loadu_pd(v + d * count + i);
      const __m256d b = _mm256_loadu_pd(t + d * count + i);
      vt = _mm256_fmadd_pd(a, b, vt);
      vv = _mm256_fmadd_pd(a, a, vv);
      tt = _mm256_fmadd_pd(b, b, tt);
    }
    const __m256d denom = _mm256_sqrt_pd(_mm256_mul_pd(vv, tt));
    const __m256d ratio = _mm256_div_pd(_mm256_andnot_pd(sign_mask, vt), denom);
    const __m256d ok = _mm256_cmp_pd(denom, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(nan, ratio, ok));
  }
  for (; i < count; ++i) {
    double vt = 0.0, vv = 0.0, tt = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double a = v[d * count + i];
      const double b = t[d * count + i];
      vt += a * b;
      vv += a * a;
      tt += b * b;
    }
    const double denom = std::sqrt(vv * tt);
    out[i] = denom > 0.0 ? std::abs(vt) / denom : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

const Kernels& avx2_kernels_impl() {
  static const Kernels k{Isa::Avx2, dot_avx2, sum_avx2, angle_deviation_avx2};
  return k;
}

}  // namespace nslab::simd
