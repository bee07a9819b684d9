#include "nslab/ansatz.hpp"

#include "nslab/geometry.hpp"
#include "nslab/roots.hpp"

#include <cmath>
#include <sstream>

namespace nslab::ansatz {

ForceField force_from_A(const ScalarField& A) {
  ForceField F;
  F.dimension = A.dimension;
  F.name = "ansatz(" + A.name + ")";
  F.spatially_homogeneous = A.spatially_homogeneous;
  F.value = [A](const PhasePoint& p) -> Vec {
    const auto [N, P] = geometry::unit_and_projector(p.v);
    return A(p) * N - p.speed() * (P * velocity_gradient(A, p));
  };
  return F;
}

ScalarField A_from_force(const ForceField& F) {
  ScalarField A;
  A.dimension = F.dimension;
  A.name = "contraction(" + F.name + ")";
  A.spatially_homogeneous = F.spatially_homogeneous;
  A.value = [F](const PhasePoint& p) {
    const double speed = p.speed();
    if (!(speed > 0.0)) throw DomainError("field undefined at v=0");
    return F(p).dot(p.v) / speed;
  };
  return A;
}

// ---------------------------------------------------------------------------

namespace {

void compile_derivatives(WFunctionSpec& s) {
  s.W_v = expr::diff(s.W, expr::kVarV);
  s.W_x.clear();
  for (int i = 0; i < s.dimension; ++i) s.W_x.push_back(expr::diff(s.W, i));
}

expr::Env env_at(const PhasePoint& p) {
  expr::Env env;
  env.x = p.x.data();
  env.n = static_cast<int>(p.x.size());
  env.v = p.speed();
  return env;
}

}  // namespace

WFunctionSpec make_w_spec(int h, const std::string& W, int dimension) {
  if (h != 0 && h != 1) throw SchemaError("/h", "h must be 0 or 1");
  if (dimension < 2) throw SchemaError("/dimension", "dimension must be at least 2");
  WFunctionSpec s;
  s.h = h;
  s.W_text = W;
  s.dimension = dimension;
  try {
    s.W = expr::parse(W);
  } catch (const SchemaError& e) {
    throw SchemaError("/W", e.what() + 2);  // drop the empty path prefix ": "
  }
  if (s.W.uses(expr::kVarW)) throw SchemaError("/W", "W may not use w");
  if (s.W.max_position_index() > dimension)
    throw SchemaError("/W", "W uses x" + std::to_string(s.W.max_position_index()) + " beyond dimension");
  compile_derivatives(s);
  return s;
}

double WFunctionSpec::h_of(double w) const {
  if (h == 0) return 0.0;
  double factor = 1.0;
  for (auto it = gauges.rbegin(); it != gauges.rend(); ++it) {
    const double u = invert_increasing(it->rho, it->drho, w);
    expr::Env env;
    env.w = u;
    const double d = expr::eval(it->drho, env);
    if (!(d > 0.0)) throw DomainError("gauge " + it->text + " is not increasing at w=" + std::to_string(u));
    factor *= d;
    w = u;
  }
  return factor;
}

WValues w_values(const WFunctionSpec& spec, const PhasePoint& p) {
  if (p.dimension() != spec.dimension) throw DomainError("phase point dimension differs from W spec");
  const expr::Env env = env_at(p);
  WValues out;
  out.W = expr::eval(spec.W, env);
  out.W_v = expr::eval(spec.W_v, env);
  out.grad.resize(spec.dimension);
  for (int i = 0; i < spec.dimension; ++i) out.grad[i] = expr::eval(spec.W_x[i], env);
  return out;
}

namespace {

WValues checked_values(const WFunctionSpec& spec, const PhasePoint& p) {
  if (!(p.speed() > 0.0)) throw DomainError("field undefined at v=0");
  WValues w = w_values(spec, p);
  if (w.W_v == 0.0 || !std::isfinite(w.W_v)) throw DomainError("singular denominator: W_v = 0");
  return w;
}

}  // namespace

double A_from_W(const WFunctionSpec& spec, const PhasePoint& p) {
  const WValues w = checked_values(spec, p);
  const double speed = p.speed();
  const Vec N = p.v / speed;
  return spec.h_of(w.W) / w.W_v - speed * N.dot(w.grad) / w.W_v;
}

Vec force_from_W(const WFunctionSpec& spec, const PhasePoint& p) {
  const WValues w = checked_values(spec, p);
  const double speed = p.speed();
  const Vec N = p.v / speed;
  return (spec.h_of(w.W) / w.W_v) * N - (speed / w.W_v) * (2.0 * N.dot(w.grad) * N - w.grad);
}

double b_sum(const WFunctionSpec& spec, const PhasePoint& p) {
  const WValues w = checked_values(spec, p);
  return p.v.dot(w.grad) / w.W_v;
}

ScalarField scalar_field_from_W(const WFunctionSpec& spec) {
  ScalarField A;
  A.dimension = spec.dimension;
  A.name = "W:" + spec.W_text;
  A.spatially_homogeneous = false;
  A.value = [spec](const PhasePoint& p) { return A_from_W(spec, p); };
  return A;
}

ForceField force_field_from_W(const WFunctionSpec& spec) {
  ForceField F;
  F.dimension = spec.dimension;
  F.name = "W:" + spec.W_text;
  F.spatially_homogeneous = false;
  F.value = [spec](const PhasePoint& p) { return force_from_W(spec, p); };
  return F;
}

double invert_increasing(const expr::Expr& rho, const expr::Expr& drho, double w) {
  expr::Env env;
  auto g = [&](double u) {
    env.w = u;
    return expr::eval(rho, env) - w;
  };
  auto dg = [&](double u) {
    env.w = u;
    return expr::eval(drho, env);
  };
  double lo = w, hi = w, step = 1.0;
  for (int k = 0; g(lo) > 0.0; ++k) {
    if (k > 200) throw NumericError("cannot bracket rho^-1(" + std::to_string(w) + ")");
    lo -= step;
    step *= 2.0;
  }
  step = 1.0;
  for (int k = 0; g(hi) < 0.0; ++k) {
    if (k > 200) throw NumericError("cannot bracket rho^-1(" + std::to_string(w) + ")");
    hi += step;
    step *= 2.0;
  }
  roots::BracketOptions opt;
  opt.bisect_width = 1e-6 * std::max(1.0, std::abs(lo) + std::abs(hi));
  return roots::bracketed_newton(g, dg, lo, hi, opt).root;
}

WFunctionSpec gauge_apply(const WFunctionSpec& spec, const std::string& rho, double w_lo, double w_hi) {
  Gauge g;
  g.text = rho;
  try {
    g.rho = expr::parse(rho);
  } catch (const SchemaError& e) {
    throw SchemaError("/gauge", e.what() + 2);
  }
  if (g.rho.uses(expr::kVarV) || g.rho.max_position_index() > 0)
    throw SchemaError("/gauge", "gauge function may only use w");
  g.drho = expr::diff(g.rho, expr::kVarW);

  constexpr int kChecks = 2001;
  expr::Env env;
  for (int i = 0; i < kChecks; ++i) {
    env.w = w_lo + (w_hi - w_lo) * i / (kChecks - 1);
    const double d = expr::eval(g.drho, env);
    if (!(d > 0.0)) {
      std::ostringstream msg;
      msg << "gauge " << rho << " is not strictly increasing: rho'(" << env.w << ") = " << d;
      throw DomainError(msg.str());
    }
  }

  WFunctionSpec out = spec;
  out.W = expr::substitute(g.rho, expr::kVarW, spec.W);
  out.gauges.push_back(std::move(g));
  compile_derivatives(out);
  return out;
}

}  // namespace nslab::ansatz
