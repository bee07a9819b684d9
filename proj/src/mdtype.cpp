#include "nslab/ansatz.hpp"

#include "nslab/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace nslab::ansatz {

namespace {

struct Compiled {
  expr::Expr H, C, H_v, C_v;
};

expr::Expr parse_v_only(const std::string& text, const char* path) {
  expr::Expr e;
  try {
    e = expr::parse(text);
  } catch (const SchemaError& err) {
    throw SchemaError(path, err.what() + 2);
  }
  if (e.max_position_index() > 0 || e.uses(expr::kVarW))
    throw SchemaError(path, "expression may only depend on v");
  return e;
}

Compiled compile(const MdTypeSpec& s) {
  Compiled c;
  c.H = s.h == 1 ? parse_v_only(s.H_text, "/H") : expr::Expr::constant(0.0);
  if (s.h == 1 && !s.free) {
    char kappa[40];
    std::snprintf(kappa, sizeof kappa, "%.17g", s.kappa);
    c.C = parse_v_only("(" + std::string(kappa) + ") * v * (" + s.H_text + ")", "/H");
  } else {
    c.C = parse_v_only(s.C_text, "/C");
  }
  c.H_v = expr::diff(c.H, expr::kVarV);
  c.C_v = expr::diff(c.C, expr::kVarV);
  return c;
}

MdTypeEval coefficients(const MdTypeSpec& s, const Compiled& c, double v) {
  expr::Env env;
  env.v = v;
  MdTypeEval e{expr::eval(c.H, env), expr::eval(c.C, env), expr::eval(c.H_v, env),
               expr::eval(c.C_v, env)};
  if (s.h == 1 && !(e.H > 0.0)) throw DomainError("H(v) must be positive, got " + std::to_string(e.H));
  return e;
}

}  // namespace

Vec MdTypeSpec::axis_or_default() const {
  if (axis.size() > 0) return axis;
  return Vec::Unit(dimension, dimension - 1);
}

void MdTypeSpec::validate() const {
  if (h != 0 && h != 1) throw SchemaError("/h", "h must be 0 or 1");
  if (dimension < 2) throw SchemaError("/dimension", "dimension must be at least 2");
  if (axis.size() > 0) {
    if (axis.size() != dimension) throw SchemaError("/axis", "axis length differs from dimension");
    if (std::abs(axis.norm() - 1.0) > 1e-12) throw SchemaError("/axis", "axis must be a unit vector");
  }
  if (!std::isfinite(kappa)) throw SchemaError("/kappa", "kappa must be finite");
  compile(*this);
}

MdTypeEval mdtype_coefficients(const MdTypeSpec& spec, double v) {
  return coefficients(spec, compile(spec), v);
}

double mdtype_axial_A(const MdTypeSpec& spec, double v, double theta) {
  if (!(v > 0.0)) throw DomainError("field undefined at v=0");
  const MdTypeEval e = mdtype_coefficients(spec, v);
  return e.H + e.C * std::cos(theta);
}

ScalarField mdtype_field(const MdTypeSpec& spec) {
  spec.validate();
  const Compiled c = compile(spec);
  const Vec m = spec.axis_or_default();
  ScalarField A;
  A.dimension = spec.dimension;
  A.name = spec.h == 1 ? "mdtype/h1" : "mdtype/h0";
  A.spatially_homogeneous = true;
  A.value = [spec, c, m](const PhasePoint& p) {
    const double v = p.speed();
    if (!(v > 0.0)) throw DomainError("field undefined at v=0");
    const MdTypeEval e = coefficients(spec, c, v);
    return e.H + e.C * p.v.dot(m) / v;
  };
  A.velocity_gradient = [spec, c, m](const PhasePoint& p) -> Vec {
    const double v = p.speed();
    if (!(v > 0.0)) throw DomainError("field undefined at v=0");
    const MdTypeEval e = coefficients(spec, c, v);
    const Vec N = p.v / v;
    const double ct = N.dot(m);
    // grad cos(theta) = (m - cos(theta) N) / v
    return (e.H_v + e.C_v * ct) * N + (e.C / v) * (m - ct * N);
  };
  A.spatial_gradient = [n = spec.dimension](const PhasePoint&) -> Vec { return Vec::Zero(n); };
  return A;
}

// ---------------------------------------------------------------------------

CosFit cos_fit(const std::vector<double>& theta, const std::vector<double>& values) {
  if (theta.size() != values.size()) throw DomainError("cos fit: theta and values differ in length");
  const std::set<double> distinct(theta.begin(), theta.end());
  if (distinct.size() < 3) throw DomainError("cos fit: degenerate grid (fewer than 3 distinct theta)");
  if (theta.size() < 32) throw DomainError("cos fit needs at least 32 theta samples");
  constexpr double guard = 0.02 - 1e-12;
  for (double t : theta)
    if (t < guard || t > std::numbers::pi - guard)
      throw DomainError("cos fit: theta outside [0.02, pi - 0.02]");

  const std::size_t n = theta.size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = std::cos(theta[i]);
  const double s0 = static_cast<double>(n);
  const double s1 = simd::sum(c);
  const double s2 = simd::dot(c, c);
  const double y0 = simd::sum(values);
  const double y1 = simd::dot(c, values);
  const double det = s0 * s2 - s1 * s1;
  CosFit fit;
  fit.H_hat = (s2 * y0 - s1 * y1) / det;
  fit.C_hat = (s0 * y1 - s1 * y0) / det;

  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = values[i] - fit.H_hat - fit.C_hat * c[i];
  const double data = std::sqrt(simd::dot(values, values));
  fit.relative_misfit = data > 0.0 ? std::sqrt(simd::dot(r, r)) / data : 0.0;
  return fit;
}

CosFit cos_fit(const std::function<double(double)>& A, const std::vector<double>& theta) {
  std::vector<double> values(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) values[i] = A(theta[i]);
  return cos_fit(theta, values);
}

std::vector<double> cos_fit_grid(int count) {
  if (count < 2) throw DomainError("cos fit grid needs at least 2 points");
  std::vector<double> g(count);
  const double lo = 0.02, hi = std::numbers::pi - 0.02;
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

}  // namespace nslab::ansatz
