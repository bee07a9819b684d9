#include "nslab/parallel.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/roots.hpp"
#include "nslab/types.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace nslab;
using doctest::Approx;

TEST_CASE("bracketed Newton finds the root of a cubic") {
  auto g = [](double x) { return x * x * x - 2.0; };
  auto dg = [](double x) { return 3.0 * x * x; };
  const auto r = roots::bracketed_newton(g, dg, 0.0, 3.0);
  CHECK(r.root == Approx(std::cbrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(r.residual) <= 1e-14);
}

TEST_CASE("bracketed Newton survives a derivative that sends Newton away") {
  // atan has flat tails; plain Newton from the bracket ends diverges
  auto g = [](double x) { return std::atan(x - 0.3); };
  auto dg = [](double x) { return 1.0 / (1.0 + (x - 0.3) * (x - 0.3)); };
  const auto r = roots::bracketed_newton(g, dg, -20.0, 40.0);
  CHECK(r.root == Approx(0.3).epsilon(1e-14));
}

TEST_CASE("bracketed Newton rejects a bracket without sign change") {
  auto g = [](double x) { return x * x + 1.0; };
  auto dg = [](double x) { return 2.0 * x; };
  CHECK_THROWS_AS(roots::bracketed_newton(g, dg, -1.0, 1.0), NumericError);
}

TEST_CASE("adaptive Gauss-Kronrod on known integrals") {
  const auto a = quad::adaptive_gk15([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  CHECK(a.value == Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  // integrable endpoint singularity
  const auto b = quad::adaptive_gk15([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  CHECK(std::abs(b.value - 2.0) <= 1e-8);
  const auto c = quad::adaptive_gk15([](double x) { return std::sin(x) * std::sin(x); }, 0.0,
                                     std::numbers::pi, 1e-12);
  CHECK(c.value == Approx(std::numbers::pi / 2).epsilon(1e-13));
}

TEST_CASE("adaptive Gauss-Kronrod reports an exhausted budget") {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-6)); };
  CHECK_THROWS_AS(quad::adaptive_gk15(wild, 0.0, 1.0, 1e-14, 8), NumericError);
}

TEST_CASE("Gauss-Legendre 30 is exact for polynomials of degree 59") {
  const auto& gl = quad::GaussLegendre30::instance();
  double wsum = 0.0;
  for (double w : gl.weights()) wsum += w;
  CHECK(wsum == Approx(2.0).epsilon(1e-15));
  for (int k : {0, 1, 2, 10, 31, 58, 59}) {
    const double got = gl.integrate([k](double x) { return std::pow(x, k); }, -1.0, 1.0);
    const double want = k % 2 ? 0.0 : 2.0 / (k + 1);
    CHECK(std::abs(got - want) <= 1e-14);
  }
  CHECK(gl.integrate([](double x) { return std::cos(x); }, 0.0, 1.0) == Approx(std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for rethrows the first failure") {
  CHECK_THROWS_WITH_AS(parallel_for(100,
                                    [](std::size_t i) {
                                      if (i == 37) throw DomainError("boom");
                                    }),
                       "boom", DomainError);
  CHECK(worker_count() >= 1);
}
