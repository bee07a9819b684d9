#include "nslab/normality.hpp"

#include "nslab/finite_diff.hpp"
#include "nslab/geometry.hpp"
#include "nslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nslab::normality {

namespace {

// Jacobians of force fields: Richardson-extrapolated central differences.
constexpr fd::FdOptions kJacobian{1e-4, true};

constexpr double kPolarStep = 1e-3;

Residual finish(Vec raw, double scale) {
  Residual r;
  r.raw_norm = raw.norm();
  r.raw = std::move(raw);
  r.scale = scale;
  r.normalized = r.raw_norm / (scale + kScaleFloor);
  return r;
}

Residual finish_scalar(double raw, double scale) {
  Vec v(1);
  v[0] = raw;
  return finish(std::move(v), scale);
}

double reflect_theta(double t) {
  constexpr double pi = std::numbers::pi;
  if (t < 0.0) return -t;
  if (t > pi) return 2.0 * pi - t;
  return t;
}

double d1_4(const std::function<double(double)>& g, double t, double h) {
  return (-g(t + 2 * h) + 8.0 * g(t + h) - 8.0 * g(t - h) + g(t - 2 * h)) / (12.0 * h);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Fail: return "FAIL";
  }
  return "?";
}

Verdict classify(double normalized) {
  if (normalized <= kPassThreshold) return Verdict::Pass;
  if (normalized >= kFailThreshold || !std::isfinite(normalized)) return Verdict::Fail;
  return Verdict::Inconclusive;
}

Residual weak_first(const ForceField& F, const PhasePoint& p) {
  const auto [N, P] = geometry::unit_and_projector(p.v);
  const double v = p.speed();
  const Vec f = F(p);
  const Vec grad_nf = fd::fd_velocity_gradient(
      [&F](const PhasePoint& q) { return F(q).dot(q.v) / q.v.norm(); }, p, kJacobian);
  const Vec t1 = P * f / v;
  const Vec t2 = P * grad_nf;
  // terms measured before the projection: for radial fields both vanish after it
  return finish(t1 + t2, f.norm() / v + grad_nf.norm());
}

Residual weak_second(const ForceField& F, const PhasePoint& p) {
  const auto [N, P] = geometry::unit_and_projector(p.v);
  const double v = p.speed();
  const Vec f = F(p);
  const Mat Jv = fd::fd_velocity_jacobian(F.value, p, kJacobian);  // (j, i) = dF_i / dv^j
  Vec u1 = Vec::Zero(f.size()), u2 = Vec::Zero(f.size());
  if (!F.spatially_homogeneous) {
    const Mat Jx = fd::fd_spatial_jacobian(F.value, p, kJacobian);
    u1 = Jx * N;              // sum_j d_i F_j N^j
    u2 = Jx.transpose() * N;  // sum_j d_j F_i N^j
  }
  const Vec u3 = -2.0 * f.dot(N) / (v * v) * f;
  const Vec u4 = Jv.transpose() * f / v;
  const double nn = N.dot(Jv * N);
  const Vec u5 = -nn / v * f;
  return finish(P * (u1 + u2 + u3 + u4 + u5), u1.norm() + u2.norm() + u3.norm() + u4.norm() + u5.norm());
}

Residual additional(const ForceField& F, const PhasePoint& p) {
  const int n = p.dimension();
  if (n < 3) throw DomainError("additional equations are for n ≥ 3");
  const auto [N, P] = geometry::unit_and_projector(p.v);
  const double v = p.speed();
  const Vec f = F(p);
  const Mat Jv = fd::fd_velocity_jacobian(F.value, p, kJacobian);
  Mat Jx = Mat::Zero(n, n);
  if (!F.spatially_homogeneous) Jx = fd::fd_spatial_jacobian(F.value, p, kJacobian);

  // Projected symmetry of M_ij = N^m F_i dF_j/dv^m / v - d_i F_j.
  const Vec d = Jv.transpose() * N;
  const Mat K = P * (f * d.transpose() / v) * P;
  const Mat X = P * Jx * P;
  const Mat M = K - X;
  const Mat R1 = M - M.transpose();
  const double s1 = 2.0 * (K.norm() + X.norm());

  // Isotropy of the projected velocity Jacobian.
  const Mat Q = P * Jv * P;
  const double tr = Q.trace() / (n - 1);
  const Mat R2 = Q - tr * P;
  const double s2 = Q.norm() + std::abs(tr) * P.norm();

  Vec raw(2 * n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      raw[r * n + c] = R1(r, c);
      raw[n * n + r * n + c] = R2(r, c);
    }
  Residual out = finish(raw, s1 + s2);
  out.normalized = std::max(R1.norm() / (s1 + kScaleFloor), R2.norm() / (s2 + kScaleFloor));
  return out;
}

Residual scalar(const ScalarField& A, const PhasePoint& p) {
  const auto [N, P] = geometry::unit_and_projector(p.v);
  const double v = p.speed();
  const double a = A(p);
  const Vec g = velocity_gradient(A, p);
  const Mat H = velocity_hessian(A, p);
  const Vec t1 = P * spatial_gradient(A, p);
  const Vec t2 = v * (P * (H * (P * g)));
  const Vec t3 = -a * (P * (H * N));
  const Vec t4 = -v * (P * (mixed_hessian(A, p).transpose() * N));
  return finish(t1 + t2 + t3 + t4, t1.norm() + t2.norm() + t3.norm() + t4.norm());
}

Residual homogeneous(const ScalarField& A, const Vec& vel) {
  const PhasePoint p(Vec::Zero(vel.size()), vel);
  const auto [N, P] = geometry::unit_and_projector(vel);
  const double v = p.speed();
  const double a = A(p);
  const Vec g = velocity_gradient(A, p);
  const Mat H = velocity_hessian(A, p);
  const Vec t2 = v * (P * (H * (P * g)));
  const Vec t3 = -a * (P * (H * N));
  return finish(t2 + t3, t2.norm() + t3.norm());
}

PolarDerivatives polar_derivatives(const PolarFn& fn, double v, double theta) {
  auto A = [&fn](double vv, double t) { return fn(vv, reflect_theta(t)); };
  const double ht = kPolarStep;
  const double hv = kPolarStep * std::max(1.0, v);
  const double h2 = 2.0 * kPolarStep;
  PolarDerivatives d;
  d.f = A(v, theta);
  d.f_v = d1_4([&](double s) { return A(s, theta); }, v, hv);
  d.f_t = d1_4([&](double s) { return A(v, s); }, theta, ht);
  d.f_tt = (-A(v, theta + 2 * h2) + 16.0 * A(v, theta + h2) - 30.0 * d.f +
            16.0 * A(v, theta - h2) - A(v, theta - 2 * h2)) /
           (12.0 * h2 * h2);
  d.f_vt = d1_4([&](double s) { return d1_4([&](double t) { return A(s, t); }, theta, ht); }, v, hv);
  return d;
}

Residual polar(const PolarFn& fn, double v, double theta) {
  if (!(v > 0.0)) throw DomainError("polar residual needs v > 0");
  const PolarDerivatives d = polar_derivatives(fn, v, theta);
  const double t1 = d.f * d.f_t / v;
  const double t2 = d.f_t * d.f_tt / v;
  const double t3 = d.f_t * d.f_v;
  const double t4 = -d.f * d.f_vt;
  return finish_scalar(t1 + t2 + t3 + t4, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
}

namespace {

Residual b_terms(double b, double b_t, double b_v, double v) {
  const double t1 = b * b_t, t2 = -v * b_v, t3 = b, t4 = b * b * b;
  return finish_scalar(t1 + t2 + t3 + t4, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
}

Residual z_terms(double z, double z_t, double z_v, double v) {
  const double t1 = z_t, t2 = -v * std::tan(z) * z_v;
  return finish_scalar(t1 + t2 - 1.0, std::abs(t1) + std::abs(t2) + 1.0);
}

}  // namespace

Residual b_equation(const PolarFn& b, double v, double theta) {
  const PolarDerivatives d = polar_derivatives(b, v, theta);
  return b_terms(d.f, d.f_t, d.f_v, v);
}

Residual b_equation_closed(const axial::AxialFieldSpec& spec, double v, double theta) {
  const double z = axial::solve_z(spec, v, theta);
  const double s = std::sin(z);
  if (std::abs(s) < 1e-300) throw DomainError("b has a pole at theta0");
  const double s2 = s * s;
  const double b = std::cos(z) / s;
  return b_terms(b, -axial::z_theta(spec, v, z) / s2, -axial::z_v(spec, v, z) / s2, v);
}

Residual z_equation(const PolarFn& z, double v, double theta) {
  const PolarDerivatives d = polar_derivatives(z, v, theta);
  return z_terms(d.f, d.f_t, d.f_v, v);
}

Residual z_equation_closed(const axial::AxialFieldSpec& spec, double v, double theta) {
  const double z = axial::solve_z(spec, v, theta);
  return z_terms(z, axial::z_theta(spec, v, z), axial::z_v(spec, v, z), v);
}

// ---------------------------------------------------------------------------

const char* equation_id(Equation e) {
  switch (e) {
    case Equation::Weak1: return "weak1";
    case Equation::Weak2: return "weak2";
    case Equation::Additional: return "additional";
    case Equation::Scalar: return "scalar";
    case Equation::Homogeneous: return "homogeneous";
    case Equation::Polar: return "polar";
  }
  return "?";
}

Equation parse_equation(const std::string& id) {
  for (Equation e : {Equation::Weak1, Equation::Weak2, Equation::Additional, Equation::Scalar,
                     Equation::Homogeneous, Equation::Polar})
    if (id == equation_id(e)) return e;
  throw DomainError("unknown equation '" + id +
                    "' (expected weak1, weak2, additional, scalar, homogeneous, polar)");
}

Summary ResidualReport::summary() const {
  if (samples.empty()) throw DomainError("no samples");
  Summary s;
  s.count = samples.size();
  std::vector<double> vals;
  vals.reserve(samples.size());
  std::size_t pass = 0, fail = 0;
  for (const auto& smp : samples) {
    vals.push_back(smp.normalized);
    const Verdict v = classify(smp.normalized);
    pass += v == Verdict::Pass;
    fail += v == Verdict::Fail;
  }
  double total = 0.0;
  for (double x : vals) total += x;
  s.mean = total / static_cast<double>(vals.size());
  std::sort(vals.begin(), vals.end());
  s.max = vals.back();
  // nearest-rank quantiles
  auto q = [&vals](double frac) {
    const auto k = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(vals.size())));
    return vals[std::min(vals.size(), std::max<std::size_t>(k, 1)) - 1];
  };
  s.p50 = q(0.50);
  s.p95 = q(0.95);
  s.pass_fraction = static_cast<double>(pass) / static_cast<double>(s.count);
  s.fail_fraction = static_cast<double>(fail) / static_cast<double>(s.count);
  if (pass == s.count) s.verdict = Verdict::Pass;
  else if (fail > 0) s.verdict = Verdict::Fail;
  else s.verdict = Verdict::Inconclusive;
  return s;
}

ResidualReport evaluate(Equation eq, const FieldBundle& field, const std::vector<PhasePoint>& points,
                        const std::string& grid) {
  if (eq == Equation::Polar && !field.polar) throw DomainError("polar residual needs a polar field");
  ResidualReport report;
  report.equation_id = equation_id(eq);
  report.grid = grid;
  report.samples.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const PhasePoint& p = points[i];
    Sample& s = report.samples[i];
    s.x = p.x;
    s.v = p.v;
    s.v_mod = p.speed();
    const Vec axis = field.axis.size() ? field.axis : Vec(Vec::Unit(p.dimension(), p.dimension() - 1));
    s.theta = geometry::polar_angle(p.v, axis);
    Residual r;
    switch (eq) {
      case Equation::Weak1: r = weak_first(field.F, p); break;
      case Equation::Weak2: r = weak_second(field.F, p); break;
      case Equation::Additional: r = additional(field.F, p); break;
      case Equation::Scalar: r = scalar(field.A, p); break;
      case Equation::Homogeneous: r = homogeneous(field.A, p.v); break;
      case Equation::Polar: r = polar(*field.polar, s.v_mod, s.theta); break;
    }
    s.raw_norm = r.raw_norm;
    s.scale = r.scale;
    s.normalized = r.normalized;
  });
  return report;
}

}  // namespace nslab::normality
