#pragma once

// Data-parallel kernels with a scalar reference implementation and ISA
// specific variants (AVX2+FMA on x86-64, NEON on AArch64). The variant is
// chosen once at runtime from CPU features; NSLAB_SIMD=scalar forces the
// reference path. Variants are equivalence-tested against the reference.

#include <cstddef>
#include <span>

namespace nslab::simd {

enum class Isa { Scalar, Avx2, Neon };

struct Kernels {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  /// out[i] = |<v_i, t_i>| / (|v_i| |t_i|), NaN when either vector is zero.
  /// Component-major layout: component d of item i lives at [d * count + i].
  void (*angle_deviation)(int dims, std::size_t count, const double* v, const double* t,
                          double* out);
};

const Kernels& scalar_kernels();
/// Null when the variant is not compiled in or the CPU lacks the feature.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();
const Kernels& active_kernels();

const char* isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}
inline double sum(std::span<const double> a) { return active_kernels().sum(a.data(), a.size()); }
inline void angle_deviation(int dims, std::size_t count, const double* v, const double* t,
                            double* out) {
  active_kernels().angle_deviation(dims, count, v, t, out);
}

}  // namespace nslab::simd
