#include "nslab/simd.hpp"

#include <cstdlib>
#include <string_view>

namespace nslab::simd {

#if defined(NSLAB_HAVE_AVX2_TU)
const Kernels& avx2_kernels_impl();
#endif
#if defined(NSLAB_HAVE_NEON_TU)
const Kernels& neon_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(NSLAB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernels_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels* neon_kernels() {
#if defined(NSLAB_HAVE_NEON_TU)
  // Advanced SIMD is mandatory on AArch64.
  return &neon_kernels_impl();
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("NSLAB_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return k;
    if (const Kernels* k = neon_kernels()) return k;
    return &scalar_kernels();
  }();
  return *chosen;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    case Isa::Scalar: break;
  }
  return "scalar";
}

}  // namespace nslab::simd
