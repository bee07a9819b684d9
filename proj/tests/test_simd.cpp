#include "nslab/sampling.hpp"
#include "nslab/simd.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nslab;

namespace {

std::vector<const simd::Kernels*> variants() {
  std::vector<const simd::Kernels*> out;
  if (auto* k = simd::avx2_kernels()) out.push_back(k);
  if (auto* k = simd::neon_kernels()) out.push_back(k);
  return out;
}

std::vector<double> noise(sampling::Rng& rng, std::size_t n) {
  std::vector<double> a(n);
  for (auto& x : a) x = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-3, 3));
  return a;
}

}  // namespace

TEST_CASE("active kernel set is one of the compiled variants") {
  const auto& active = simd::active_kernels();
  bool known = &active == &simd::scalar_kernels();
  for (auto* k : variants()) known = known || &active == k;
  CHECK(known);
  MESSAGE("active ISA: " << simd::isa_name(active.isa));
}

TEST_CASE("dot and sum: variants match the scalar reference") {
  sampling::Rng rng(21);
  const auto& ref = simd::scalar_kernels();
  for (auto* k : variants()) {
    CAPTURE(simd::isa_name(k->isa));
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto a = noise(rng, n), b = noise(rng, n);
      double mag = 0.0, amag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mag += std::abs(a[i] * b[i]);
        amag += std::abs(a[i]);
      }
      // only the summation order differs
      CHECK(std::abs(k->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-15 * (mag + 1e-300) * 8);
      CHECK(std::abs(k->sum(a.data(), n) - ref.sum(a.data(), n)) <= 1e-15 * (amag + 1e-300) * 8);
    }
  }
}

TEST_CASE("angle deviation: variants match the scalar reference") {
  sampling::Rng rng(22);
  const auto& ref = simd::scalar_kernels();
  for (auto* k : variants()) {
    CAPTURE(simd::isa_name(k->isa));
    for (int dims : {2, 3, 4, 7}) {
      for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 131u}) {
        auto v = noise(rng, dims * count), t = noise(rng, dims * count);
        if (count > 2) {
          for (int d = 0; d < dims; ++d) t[d * count + 1] = 0.0;  // degenerate tangent
        }
        std::vector<double> a(count), b(count);
        k->angle_deviation(dims, count, v.data(), t.data(), a.data());
        ref.angle_deviation(dims, count, v.data(), t.data(), b.data());
        for (std::size_t i = 0; i < count; ++i) {
          if (std::isnan(b[i])) {
            CHECK(std::isnan(a[i]));
          } else {
            CHECK(std::abs(a[i] - b[i]) <= 1e-13);
          }
        }
      }
    }
  }
}

TEST_CASE("angle deviation values") {
  // v = (1, 0), t = (0, 1): orthogonal; v = (1, 1), t = (1, 0): 1/sqrt(2)
  const double v[] = {1.0, 1.0, 0.0, 1.0};
  const double t[] = {0.0, 1.0, 1.0, 0.0};
  double out[2];
  simd::angle_deviation(2, 2, v, t, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("span wrappers clip to the shorter input") {
  const std::vector<double> a{1, 2, 3}, b{4, 5};
  CHECK(simd::dot(a, b) == 14.0);
  CHECK(simd::sum(a) == 6.0);
}
