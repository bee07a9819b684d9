#include "nslab/simd.hpp"

#include <cmath>
#include <limits>

namespace nslab::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void angle_deviation_scalar(int dims, std::size_t count, const double* v, const double* t,
                            double* out) {
  for (std::size_t i = 0; i < count; ++i) {
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

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::Scalar, dot_scalar, sum_scalar, angle_deviation_scalar};
  return k;
}

}  // namespace nslab::simd
