#include "nslab/ansatz.hpp"
#include "nslab/axial.hpp"
#include "nslab/normality.hpp"
#include "nslab/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nslab;
using namespace nslab::normality;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

PhasePoint polar_point(double v, double th, double phi = 0.4) {
  return PhasePoint(vec3(0.1, -0.3, 0.2),
                    v * vec3(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th)));
}

ScalarField speed_field(int n) {
  ScalarField A;
  A.dimension = n;
  A.name = "|v|";
  A.spatially_homogeneous = true;
  A.value = [](const PhasePoint& p) { return p.v.norm(); };
  return A;
}

FieldBundle axial_bundle(axial::ProfileKind kind = axial::ProfileKind::Log) {
  const auto s = axial::canonical_spec(kind);
  FieldBundle b;
  b.A = axial::lift_to_field(s);
  b.F = axial::force_field(s);
  b.polar = [s](double v, double th) { return axial::A_polar(s, v, th); };
  b.axis = s.axis_or_default();
  return b;
}

}  // namespace

TEST_CASE("verdict thresholds") {
  CHECK(classify(0.0) == Verdict::Pass);
  CHECK(classify(1e-4) == Verdict::Pass);
  CHECK(classify(2e-4) == Verdict::Inconclusive);
  CHECK(classify(1e-2) == Verdict::Fail);
  CHECK(std::string(verdict_name(Verdict::Fail)) == "FAIL");
  CHECK(parse_equation("weak2") == Equation::Weak2);
  CHECK(std::string(equation_id(Equation::Additional)) == "additional");
  CHECK_THROWS(parse_equation("strong"));
}

TEST_CASE("zero force satisfies every vector equation") {
  const auto F = zero_force(3);
  const auto p = polar_point(2.0, 1.0);
  CHECK(weak_first(F, p).raw_norm == 0.0);
  CHECK(weak_second(F, p).raw_norm == 0.0);
  CHECK(additional(F, p).raw_norm == 0.0);
  CHECK(weak_first(F, p).normalized == 0.0);
}

TEST_CASE("first weak equation: ansatz identity and a constant force") {
  const auto F = ansatz::force_from_A(speed_field(3));
  sampling::Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    const auto p = polar_point(rng.uniform(0.5, 5.0), rng.uniform(0.1, 3.0), rng.uniform(0.0, 6.0));
    CHECK(weak_first(F, p).normalized <= 1e-6);
  }
  const auto c = constant_force(vec3(1.0, 0.5, 0.0));
  CHECK(weak_first(c, polar_point(2.0, 1.0)).normalized > 1e-2);
}

TEST_CASE("second weak equation on the axial field") {
  const auto s = axial::canonical_spec();
  const auto F = axial::force_field(s);
  const auto pts = sampling::phase_samples(sampling::axial_region(s), 100, 7);
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, weak_second(F, p).normalized);
  CHECK(worst <= 1e-4);
  // the polar oracle on the same points
  for (const auto& p : pts) {
    const double th = std::acos(std::clamp(p.v[2] / p.v.norm(), -1.0, 1.0));
    CHECK(polar([s](double v, double t) { return axial::A_polar(s, v, t); }, p.v.norm(), th).normalized <= 1e-4);
  }
}

TEST_CASE("closed-family fields satisfy both weak equations") {
  const auto spec = ansatz::make_w_spec(0, "v*x1", 3);
  const auto F = ansatz::force_field_from_W(spec);
  const auto A = ansatz::scalar_field_from_W(spec);
  sampling::Rng rng(42);
  for (int k = 0; k < 30; ++k) {
    PhasePoint p(vec3(rng.uniform(0.5, 2.0), rng.uniform(-1, 1), rng.uniform(-1, 1)),
                 vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(1, 2)));
    CHECK(weak_second(F, p).normalized <= 1e-4);
    CHECK(scalar(A, p).normalized <= 1e-4);
  }
}

TEST_CASE("additional equations") {
  SUBCASE("need n >= 3") {
    Vec x = Vec::Zero(2), v(2);
    v << 1, 1;
    CHECK_THROWS_WITH_AS(additional(zero_force(2), PhasePoint(x, v)), "additional equations are for n ≥ 3",
                         DomainError);
  }
  SUBCASE("comparison family h=0 passes") {
    ansatz::MdTypeSpec md;
    md.h = 0;
    md.C_text = "v^2 + 1";
    const auto F = ansatz::force_from_A(ansatz::mdtype_field(md));
    sampling::Rng rng(43);
    for (int k = 0; k < 30; ++k) {
      const auto p = polar_point(rng.uniform(1, 5), rng.uniform(0.1, 3.0), rng.uniform(0, 6));
      CHECK(additional(F, p).normalized <= 1e-4);
    }
  }
  SUBCASE("coupled family h=1 passes") {
    ansatz::MdTypeSpec md;
    md.h = 1;
    md.H_text = "1 + v";
    md.kappa = 0.5;
    const auto F = ansatz::force_from_A(ansatz::mdtype_field(md));
    for (double th : {0.3, 1.2, 2.5}) CHECK(additional(F, polar_point(3.0, th)).normalized <= 1e-4);
  }
  SUBCASE("axial field anchor") {
    // frozen at v = 4, theta = 1 for the canonical log profile
    const auto F = axial::force_field(axial::canonical_spec());
    const auto r = additional(F, polar_point(4.0, 1.0, 0.0));
    MESSAGE("additional residual at v=4, theta=1: " << r.normalized);
    CHECK(r.normalized == Approx(3.37e-3).epsilon(0.02));
    CHECK(r.normalized > 1e3 * weak_second(F, polar_point(4.0, 1.0, 0.0)).normalized);
  }
}

TEST_CASE("scalar and homogeneous forms") {
  const auto one = constant_scalar(3, 2.5);
  CHECK(scalar(one, polar_point(2.0, 1.0)).raw_norm == 0.0);
  CHECK(homogeneous(one, vec3(1, 2, 3)).raw_norm == 0.0);

  const auto b = axial_bundle();
  const auto pts = sampling::phase_samples(sampling::axial_region(axial::canonical_spec()), 100, 8);
  for (const auto& p : pts) {
    const auto s = scalar(b.A, p), h = homogeneous(b.A, p.v);
    CHECK(s.normalized <= 1e-4);
    CHECK((s.raw - h.raw).norm() <= 1e-10 * (1.0 + s.scale));
  }

  ScalarField sq;
  sq.dimension = 3;
  sq.spatially_homogeneous = true;
  sq.value = [](const PhasePoint& p) { return p.v[0] * p.v[0]; };
  CHECK(homogeneous(sq, vec3(1, 1, 0)).normalized > 1e-2);
}

TEST_CASE("scalar and second weak verdicts agree under the ansatz") {
  sampling::Rng rng(44);
  for (int k = 0; k < 6; ++k) {
    const auto poly = sampling::random_polynomial(rng, 3, 3);
    const auto A = sampling::polynomial_field(poly, "poly");
    const auto F = ansatz::force_from_A(A);
    const auto p = polar_point(rng.uniform(1, 3), rng.uniform(0.3, 2.8));
    const double s = scalar(A, p).normalized, w = weak_second(F, p).normalized;
    CHECK(((s <= 1e-4 && w <= 1e-4) || (s > 1e-3 && w > 1e-3)));
  }
}

TEST_CASE("polar form") {
  const auto H = [](double v, double) { return std::exp(v); };
  CHECK(polar(H, 2.0, 1.0).raw_norm <= 1e-8);  // difference rounding only
  const auto Ccos = [](double v, double th) { return (v * v + std::sin(v)) * std::cos(th); };
  for (double th : {0.3, 1.0, 2.2}) CHECK(polar(Ccos, 1.7, th).normalized <= 1e-8);
  const auto bad = [](double v, double th) { return std::cos(th) + v; };
  CHECK(polar(bad, 2.0, 1.0).normalized > 1e-2);

  // the axial solution and its rescalings
  const auto s = axial::canonical_spec();
  auto A = [s](double v, double th) { return axial::A_polar(s, v, th); };
  for (double v : {3.5, 5.0, 8.0}) {
    const double t0 = axial::theta0(s, v);
    for (double th : {0.3, 1.0, t0 - 0.1, t0 + 0.1, 2.8}) {
      CAPTURE(v);
      CAPTURE(th);
      CHECK(polar(A, v, th).normalized <= 1e-6);
      CHECK(polar([&](double a, double b) { return 2.0 * A(a, b); }, v, th).normalized <= 1e-6);
      CHECK(polar([&](double a, double b) { return (1.0 + a * a) * A(a, b); }, v, th).normalized <= 1e-6);
    }
  }
  // mdtype h=1 coupled
  ansatz::MdTypeSpec md;
  md.h = 1;
  const auto Am = [md](double v, double th) { return ansatz::mdtype_axial_A(md, v, th); };
  CHECK(polar(Am, 2.0, 1.1).normalized <= 1e-8);
}

TEST_CASE("b and z equations") {
  const auto zero = [](double, double) { return 0.0; };
  CHECK(b_equation(zero, 2.0, 1.0).raw_norm == 0.0);
  const auto bz = [](double, double th) { return 1.0 / std::tan(th - kPi / 2); };
  CHECK(b_equation(bz, 2.0, 1.0).normalized <= 1e-9);
  const auto zlin = [](double, double th) { return th - kPi / 2; };
  CHECK(z_equation(zlin, 3.0, 1.2).raw_norm <= 1e-12);
  const auto zhalf = [](double, double th) { return th / 2; };
  CHECK(z_equation(zhalf, 3.0, 1.2).raw[0] == Approx(-0.5).epsilon(1e-9));

  for (auto kind : {axial::ProfileKind::Log, axial::ProfileKind::Sqrt}) {
    const auto s = axial::canonical_spec(kind);
    double worst_b = 0.0, worst_z = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double v = s.knot() * 1.05 + 10.0 * i / 49;
      const double t0 = axial::theta0(s, v);
      for (int j = 0; j < 50; ++j) {
        const double th = 0.02 + (kPi - 0.04) * j / 49;
        if (std::abs(th - t0) <= 0.02) continue;
        worst_b = std::max(worst_b, b_equation_closed(s, v, th).normalized);
        const double z = axial::solve_z(s, v, th);
        if (std::abs(z) < kPi / 2 - 0.01) worst_z = std::max(worst_z, z_equation_closed(s, v, th).normalized);
        if (i % 7 == 0 && j % 7 == 0) {
          const auto bf = [s](double a, double b) { return axial::b_eval(s, a, b); };
          worst_fd = std::max(worst_fd, b_equation(bf, v, th).normalized);
        }
      }
    }
    CHECK(worst_b <= 1e-9);
    CHECK(worst_z <= 1e-9);
    CHECK(worst_fd <= 1e-6);
  }
}

TEST_CASE("characteristics and first integrals") {
  const auto lin = characteristic_flow({0.5, 0.0, 3.0, 0.0}, 0.4, 1e-3);
  const auto& last = lin.states.back();
  CHECK(last.t == Approx(0.4));
  CHECK(last.theta == Approx(0.9).epsilon(1e-14));
  CHECK(last.z == Approx(0.4).epsilon(1e-14));
  CHECK_FALSE(lin.halted);

  CHECK(first_integrals({1.0, 1.0, 2.0, 0.0}).I1 == 0.0);
  CHECK(first_integrals({1.0, kPi / 2 - 1e-12, 2.0, 0.0}).I2 <= 1e-12);

  // start on the solution graph and check transport and conservation
  for (auto kind : {axial::ProfileKind::Log, axial::ProfileKind::Sqrt}) {
    const auto s = axial::canonical_spec(kind);
    const double v0 = 6.0, th0 = 1.0;
    const CharacteristicState st{th0, axial::solve_z(s, v0, th0), v0, 0.0};
    const auto flow = characteristic_flow(st, 1.0, 1e-3);
    const auto i0 = first_integrals(st);
    double d1 = 0.0, d2 = 0.0, rel = 0.0, transport = 0.0;
    for (const auto& q : flow.states) {
      const auto i = first_integrals(q);
      d1 = std::max(d1, std::abs(i.I1 - i0.I1));
      d2 = std::max(d2, std::abs(i.I2 - i0.I2));
      rel = std::max(rel, std::abs(i.I1 - s.profile.f(i.I2)));
      if (q.v > s.v_min() * 1.01) transport = std::max(transport, std::abs(axial::solve_z(s, q.v, q.theta) - st.z - q.t));
    }
    CHECK(d1 <= 1e-12);
    CHECK(d2 <= 1e-8);
    CHECK(rel <= 1e-10);
    CHECK(transport <= 1e-6);
  }

  // z escapes towards pi/2
  const auto esc = characteristic_flow({2.0, 1.5, 3.0, 0.0}, 1.0, 1e-3);
  CHECK(esc.halted);
  CHECK(esc.states.back().z <= kPi / 2);
}

TEST_CASE("report summary") {
  ResidualReport r;
  r.equation_id = "weak2";
  CHECK_THROWS_WITH_AS(r.summary(), "no samples", DomainError);
  for (double x : {1e-8, 1e-6, 5e-5}) r.samples.push_back({Vec(), Vec(), 1.0, 0.5, x, 1.0, x});
  auto s = r.summary();
  CHECK(s.count == 3);
  CHECK(s.max == 5e-5);
  CHECK(s.verdict == Verdict::Pass);
  CHECK(s.pass_fraction == 1.0);
  r.samples.push_back({Vec(), Vec(), 1.0, 0.5, 1e-3, 1.0, 1e-3});
  CHECK(r.summary().verdict == Verdict::Inconclusive);
  r.samples.push_back({Vec(), Vec(), 1.0, 0.5, 0.2, 1.0, 0.2});
  s = r.summary();
  CHECK(s.verdict == Verdict::Fail);
  CHECK(s.fail_fraction == Approx(0.2));
}

TEST_CASE("evaluate keeps input order and class separation holds") {
  const auto b = axial_bundle();
  const auto pts = sampling::phase_samples(sampling::axial_region(axial::canonical_spec()), 200, 1);
  const auto weak = evaluate(Equation::Weak2, b, pts, "random");
  REQUIRE(weak.samples.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(weak.samples[i].v == pts[i].v);
  CHECK(weak.summary().verdict == Verdict::Pass);
  CHECK(evaluate(Equation::Polar, b, pts).summary().verdict == Verdict::Pass);
  CHECK(evaluate(Equation::Additional, b, pts).summary().verdict == Verdict::Fail);

  FieldBundle no_polar = b;
  no_polar.polar.reset();
  CHECK_THROWS(evaluate(Equation::Polar, no_polar, pts));
}
