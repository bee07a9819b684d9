#include "nslab/axial.hpp"

#include "nslab/geometry.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/roots.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nslab::axial {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

void require_admissible(const AxialFieldSpec& spec, double v, double theta) {
  if (!(v > spec.v_min())) {
    std::ostringstream msg;
    msg << "below v_min: intersection not guaranteed unique (v=" << v
        << ", v_min=" << spec.v_min() << ")";
    throw DomainError(msg.str());
  }
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta outside [0, pi]");
}

// cot z - 1/z, with the series near 0.
double cot_minus_inv(double z) {
  if (std::abs(z) < 1e-2) {
    const double z2 = z * z;
    return -z * (1.0 / 3.0 + z2 * (1.0 / 45.0 + z2 * (2.0 / 945.0 + z2 / 4725.0)));
  }
  return 1.0 / std::tan(z) - 1.0 / z;
}

// f(cos z / v) - f(1/v), with cos z - 1 = -2 sin^2(z/2).
double profile_drop(const AxialProfile& f, double v, double z) {
  const double s = std::sin(0.5 * z);
  return f.f_diff(1.0 / v, -2.0 * s * s / v);
}

struct JIntegrals {
  double J = 0.0;
  double J_v = 0.0;
};

JIntegrals j_integrals(const AxialProfile& f, double v, double z, bool with_v) {
  const auto& rule = quad::GaussLegendre30::instance();
  const double a = -kHalfPi;
  const double half = 0.5 * (z - a), mid = 0.5 * (z + a);
  std::array<double, quad::GaussLegendre30::kPoints> jv{}, jdv{};
  for (int i = 0; i < quad::GaussLegendre30::kPoints; ++i) {
    const double w = std::cos(mid + half * rule.nodes()[i]) / v;
    const double fp = f.fp(w);
    jv[i] = fp * w;
    if (with_v) jdv[i] = -(f.fpp(w) * w + fp) * w / v;
  }
  return {half * rule.weighted_sum(jv), with_v ? half * rule.weighted_sum(jdv) : 0.0};
}

}  // namespace

Vec AxialFieldSpec::axis_or_default() const {
  if (axis.size() > 0) return axis;
  Vec e = Vec::Zero(dimension);
  e(dimension - 1) = 1.0;
  return e;
}

void AxialFieldSpec::validate() const {
  if (dimension < 2) throw DomainError("dimension must be at least 2");
  if (!(cutoff_margin > 0.0)) throw DomainError("cutoff_margin must be positive");
  if (!(v0 > knot())) {
    std::ostringstream msg;
    msg << "v0 must exceed v_min (1 + cutoff_margin) = " << knot();
    throw DomainError(msg.str());
  }
  if (axis.size() > 0) {
    if (axis.size() != dimension) throw DomainError("axis length differs from dimension");
    if (std::abs(axis.norm() - 1.0) > 1e-12) throw DomainError("axis must be a unit vector");
  }
  const std::string bad = profile.check_properties();
  if (!bad.empty()) throw DomainError("profile: " + bad);
  // theta0 must stay below pi on the whole support of the cutoff.
  theta0(*this, knot());
}

AxialFieldSpec canonical_spec(ProfileKind kind) {
  AxialFieldSpec s;
  s.profile = AxialProfile(kind, 1.0, 1.0);
  s.v0 = 3.0;
  s.cutoff_margin = 0.05;
  s.dimension = 3;
  return s;
}

double solve_z(const AxialFieldSpec& spec, double v, double theta) {
  require_admissible(spec, v, theta);
  if (theta == 0.0) return -kHalfPi;
  if (theta == kPi) return kHalfPi;
  const AxialProfile& f = spec.profile;
  auto g = [&](double z) { return theta - z - f.f(std::cos(z) / v); };
  auto dg = [&](double z) { return -1.0 + f.fp(std::cos(z) / v) * std::sin(z) / v; };
  return roots::bracketed_newton(g, dg, -kHalfPi, kHalfPi).root;
}

double theta0(const AxialFieldSpec& spec, double v) {
  if (!(v > spec.v_min())) throw DomainError("below v_min: intersection not guaranteed unique");
  const double t0 = spec.profile.f(1.0 / v);
  if (!(t0 < kPi)) throw DomainError("theta0 outside (0,pi): shrink 1/v or rescale profile");
  return t0;
}

double z_theta(const AxialFieldSpec& spec, double v, double z) {
  return 1.0 / (1.0 - spec.profile.fp(std::cos(z) / v) * std::sin(z) / v);
}

double z_v(const AxialFieldSpec& spec, double v, double z) {
  const double fp = spec.profile.fp(std::cos(z) / v);
  return fp * std::cos(z) / (v * v * (1.0 - fp * std::sin(z) / v));
}

double b_eval(const AxialFieldSpec& spec, double v, double theta) {
  require_admissible(spec, v, theta);
  if (std::abs(theta - theta0(spec, v)) < kPoleGuard) {
    std::ostringstream msg;
    msg << "b has a pole at theta0=" << theta0(spec, v) << " (theta=" << theta << ")";
    throw DomainError(msg.str());
  }
  const double z = solve_z(spec, v, theta);
  return std::cos(z) / std::sin(z);
}

double solve_z_offset(const AxialFieldSpec& spec, double v, double e) {
  if (e == 0.0) return 0.0;
  const AxialProfile& f = spec.profile;
  auto g = [&](double z) { return e - z - profile_drop(f, v, z); };
  auto dg = [&](double z) { return -1.0 + f.fp(std::cos(z) / v) * std::sin(z) / v; };
  // The drop is <= 0, so z >= e; z and e share sign.
  const double lo = e > 0.0 ? std::min(e, kHalfPi) : std::max(-kHalfPi, e);
  const double hi = e > 0.0 ? kHalfPi : 0.0;
  roots::BracketOptions opt;
  opt.bisect_width = std::min(1e-6, 1e-3 * std::abs(e));
  return roots::bracketed_newton(g, dg, lo, hi, opt).root;
}

double pole_subtracted_b(const AxialFieldSpec& spec, double v, double e) {
  if (e == 0.0) return -spec.profile.fp(1.0 / v) / (2.0 * v);
  const double z = solve_z_offset(spec, v, e);
  if (z == 0.0) return -spec.profile.fp(1.0 / v) / (2.0 * v);
  const double drop = profile_drop(spec.profile, v, z);
  return cot_minus_inv(z) + drop / (z * e);
}

VpIntegral regularized_vp_integral(const AxialFieldSpec& spec, double v, double theta,
                                   double abs_tol) {
  require_admissible(spec, v, theta);
  const double t0 = theta0(spec, v);
  VpIntegral out;
  if (theta == 0.0) {
    out.principal = 0.0;
    return out;
  }
  auto integrand = [&](double e) { return pole_subtracted_b(spec, v, e); };
  const double e_lo = -t0, e_hi = theta - t0;
  auto add = [&](double a, double b, double tol) {
    const auto r = quad::adaptive_gk15(integrand, a, b, tol);
    out.S += r.value;
    out.error_estimate += r.error_estimate;
    out.evaluations += r.evaluations;
  };
  if (e_hi > 0.0) {
    add(e_lo, 0.0, 0.5 * abs_tol);
    add(0.0, e_hi, 0.5 * abs_tol);
  } else {
    add(e_lo, e_hi, abs_tol);
  }
  out.principal = out.S + std::log(std::abs(theta - t0)) - std::log(t0);
  return out;
}

double cutoff_C(const AxialFieldSpec& spec, double v) {
  const double a = spec.knot();
  if (v <= a) return 0.0;
  if (v >= spec.v0) return 1.0;
  const double t = (v - a) / (spec.v0 - a);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_dC(const AxialFieldSpec& spec, double v) {
  const double a = spec.knot();
  if (v <= a || v >= spec.v0) return 0.0;
  const double t = (v - a) / (spec.v0 - a);
  const double s = t * (1.0 - t);
  return 30.0 * s * s / (spec.v0 - a);
}

PolarJet A_polar_jet(const AxialFieldSpec& spec, double v, double theta, bool with_v) {
  if (!(v > 0.0)) throw DomainError("field undefined at v=0");
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta outside [0, pi]");
  PolarJet jet;
  if (v <= spec.knot()) return jet;

  const AxialProfile& f = spec.profile;
  const double C = cutoff_C(spec, v), dC = cutoff_dC(spec, v);
  const double z = solve_z(spec, v, theta);
  const double sz = std::sin(z), cz = std::cos(z);
  const JIntegrals j = j_integrals(f, v, z, with_v);
  const double ej = std::exp(-j.J);

  jet.z = z;
  jet.A = C * sz * ej;
  jet.A_theta = C * cz * ej;
  if (with_v) jet.A_v = ej * (dC * sz + C * (f.fp(cz / v) * cz * cz / (v * v) - sz * j.J_v));

  const double st = std::sin(theta);
  if (st > 1e-6) {
    jet.A_theta_over_sin = jet.A_theta / st;
  } else {
    // cos z / sin(theta) -> z_theta at the ends of [0, pi]
    jet.A_theta_over_sin = C * ej * z_theta(spec, v, z);
  }
  return jet;
}

double A_polar(const AxialFieldSpec& spec, double v, double theta) {
  return A_polar_jet(spec, v, theta, false).A;
}

double A_polar_by_quadrature(const AxialFieldSpec& spec, double v, double theta,
                             double abs_tol) {
  if (!(v > 0.0)) throw DomainError("field undefined at v=0");
  if (v <= spec.knot()) return 0.0;
  const double t0 = theta0(spec, v);
  if (theta == t0) return 0.0;
  const VpIntegral I = regularized_vp_integral(spec, v, theta, abs_tol);
  const double sign = theta > t0 ? 1.0 : -1.0;
  return cutoff_C(spec, v) * sign * (std::abs(theta - t0) / t0) * std::exp(I.S);
}

ScalarField lift_to_field(const AxialFieldSpec& spec) {
  spec.validate();
  const Vec axis = spec.axis_or_default();
  const int n = spec.dimension;
  auto check = [n](const PhasePoint& p) {
    if (p.v.size() != n) throw DomainError("phase point dimension differs from field dimension");
  };

  ScalarField A;
  A.dimension = n;
  A.name = std::string("axial/") + AxialProfile::kind_name(spec.profile.kind());
  A.spatially_homogeneous = true;
  A.value = [spec, axis, check](const PhasePoint& p) {
    check(p);
    const double v = p.v.norm();
    if (v == 0.0) throw DomainError("field undefined at v=0");
    return A_polar(spec, v, geometry::polar_angle(p.v, axis));
  };
  A.velocity_gradient = [spec, axis, check](const PhasePoint& p) -> Vec {
    check(p);
    const double v = p.v.norm();
    if (v == 0.0) throw DomainError("field undefined at v=0");
    const double theta = geometry::polar_angle(p.v, axis);
    const PolarJet jet = A_polar_jet(spec, v, theta);
    const Vec N = p.v / v;
    // grad theta = (cos(theta) N - m) / (v sin(theta)); the bracket vanishes on the axis.
    return jet.A_v * N + (jet.A_theta_over_sin / v) * (std::cos(theta) * N - axis);
  };
  A.spatial_gradient = [n](const PhasePoint&) -> Vec { return Vec::Zero(n); };
  return A;
}

ForceField force_field(const AxialFieldSpec& spec) {
  spec.validate();
  const Vec axis = spec.axis_or_default();
  const int n = spec.dimension;
  ForceField F;
  F.dimension = n;
  F.name = std::string("axial/") + AxialProfile::kind_name(spec.profile.kind());
  F.spatially_homogeneous = true;
  F.value = [spec, axis, n](const PhasePoint& p) -> Vec {
    if (p.v.size() != n) throw DomainError("phase point dimension differs from field dimension");
    const double v = p.v.norm();
    if (v == 0.0) throw DomainError("field undefined at v=0");
    const double theta = geometry::polar_angle(p.v, axis);
    const PolarJet jet = A_polar_jet(spec, v, theta, false);
    const Vec N = p.v / v;
    // -|v| P grad A = (A_theta / sin(theta)) (m - cos(theta) N)
    return jet.A * N + jet.A_theta_over_sin * (axis - std::cos(theta) * N);
  };
  return F;
}

}  // namespace nslab::axial
