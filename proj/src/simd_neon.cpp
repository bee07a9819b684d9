#include "nslab/simd.hpp"

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace nslab::simd {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

void angle_deviation_neon(int dims, std::size_t count, const double* v, const double* t,
                          double* out) {
  const double qnan = std::numeric_limits<double>::quiet_NaN();
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    float64x2_t vt = vdupq_n_f64(0.0), vv = vt, tt = vt;
    for (int d = 0; d < dims; ++d) {
      const float64x2_t a = vld1q_f64(v + d * count + i);
      const float64x2_t b = vld1q_f64(t + d * count + i);
      vt = vfmaq_f64(vt, a, b);
      vv = vfmaq_f64(vv, a, a);
      tt = vfmaq_f64(tt, b, b);
    }
    const float64x2_t denom = vsqrtq_f64(vmulq_f64(vv, tt));
    const float64x2_t ratio = vdivq_f64(vabsq_f64(vt), denom);
    const uint64x2_t ok = vcgtq_f64(denom, vdupq_n_f64(0.0));
    vst1q_f64(out + i, vbslq_f64(ok, ratio, vdupq_n_f64(qnan)));
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
    out[i] = denom > 0.0 ? std::abs(vt) / denom : qnan;
  }
}

}  // namespace

const Kernels& neon_kernels_impl() {
  static const Kernels k{Isa::Neon, dot_neon, sum_neon, angle_deviation_neon};
  return k;
}

}  // namespace nslab::simd
