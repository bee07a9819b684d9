#include "nslab/expr.hpp"
#include "nslab/types.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace nslab;
using namespace nslab::expr;
using doctest::Approx;

namespace {

double at(const std::string& text, double v, std::initializer_list<double> x = {}, double w = 0.0) {
  const std::vector<double> xs(x);
  return eval(parse(text), Env{xs.data(), static_cast<int>(xs.size()), v, w});
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(at("1 + 2 * 3", 0) == 7.0);
  CHECK(at("(1 + 2) * 3", 0) == 9.0);
  CHECK(at("2 ^ 3 ^ 2", 0) == 512.0);
  CHECK(at("-2 ^ 2", 0) == -4.0);
  CHECK(at("2 ^ -1", 0) == 0.5);
  CHECK(at("8 / 4 / 2", 0) == 1.0);
  CHECK(at("1 - 2 - 3", 0) == -4.0);
  CHECK(at("1.5e2 + .5", 0) == 150.5);
}

TEST_CASE("variables, constants and functions") {
  CHECK(at("v^2 + x1 * x3", 3.0, {2.0, 0.0, 5.0}) == 19.0);
  CHECK(at("w^3 + w", 0.0, {}, 2.0) == 10.0);
  CHECK(at("pi", 0) == std::numbers::pi);
  CHECK(at("exp(ln(v))", 2.5) == Approx(2.5).epsilon(1e-15));
  CHECK(at("sqrt(v) * cos(0) + sin(0) + tan(0) + atan(1)", 4.0) == Approx(2.0 + std::numbers::pi / 4));
  CHECK(at("cosh(v)^2 - sinh(v)^2 + tanh(0)", 1.3) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("syntax errors name the column") {
  CHECK_THROWS_AS(parse("1 +"), SchemaError);
  CHECK_THROWS_AS(parse("foo(v)"), SchemaError);
  CHECK_THROWS_AS(parse("(v"), SchemaError);
  CHECK_THROWS_AS(parse("v v"), SchemaError);
  CHECK_THROWS_AS(parse("x0"), SchemaError);
  try {
    parse("v * * 2");
    FAIL("expected a syntax error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("evaluation outside the dimension is a domain error") {
  CHECK_THROWS_AS(at("x4", 1.0, {1, 2, 3}), DomainError);
}

TEST_CASE("structure queries") {
  const auto e = parse("x1 * v + x3");
  CHECK(e.max_position_index() == 3);
  CHECK(e.uses(kVarV));
  CHECK_FALSE(e.uses(kVarW));
  CHECK(parse("2 * 3").is_constant());
  CHECK(parse("2 * 3").constant_value() == 6.0);
  CHECK_FALSE(e.is_constant());
  CHECK(Expr().is_constant());
  CHECK(Expr().constant_value() == 0.0);
}

TEST_CASE("symbolic derivatives match differences") {
  const char* cases[] = {"x1 * v", "v^3 / (1 + x2^2)", "exp(-v) * sin(x1)", "ln(1 + v^2) + sqrt(v)",
                         "atan(v * x1) - tanh(x2 / v)", "v^v", "cosh(x1)^2 / v"};
  const std::vector<double> x{0.7, -0.4};
  for (const char* c : cases) {
    CAPTURE(c);
    const auto e = parse(c);
    const double v = 1.3, h = 1e-6;
    const double dv = eval(diff(e, kVarV), Env{x.data(), 2, v, 0});
    const double fdv = (eval(e, Env{x.data(), 2, v + h, 0}) - eval(e, Env{x.data(), 2, v - h, 0})) / (2 * h);
    CHECK(dv == Approx(fdv).epsilon(1e-7));
    for (int i = 0; i < 2; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double dx = eval(diff(e, i), Env{x.data(), 2, v, 0});
      const double fdx = (eval(e, Env{xp.data(), 2, v, 0}) - eval(e, Env{xm.data(), 2, v, 0})) / (2 * h);
      CHECK(std::abs(dx - fdx) <= 1e-7 * (1 + std::abs(fdx)));
    }
  }
  CHECK(diff(parse("x1 + 3"), kVarV).is_constant());
}

TEST_CASE("substitution and printing") {
  const auto rho = parse("w^3 + w");
  const auto composed = substitute(rho, kVarW, parse("x1 * v"));
  const std::vector<double> x{2.0};
  CHECK(eval(composed, Env{x.data(), 1, 1.5, 0}) == Approx(27.0 + 3.0));
  const auto e = parse("x1 * v^2 - exp(v) / 3");
  const auto back = parse(to_string(e));
  for (double v : {0.5, 1.0, 2.0}) CHECK(eval(back, Env{x.data(), 1, v, 0}) == eval(e, Env{x.data(), 1, v, 0}));
}
