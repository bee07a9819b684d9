#include "nslab/sampling.hpp"

#include "nslab/geometry.hpp"

#include <cmath>
#include <numbers>

namespace nslab::sampling {

double Rng::normal() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double w = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * w);
}

Vec PhaseRegion::axis_or_default() const {
  if (axis.size() == 0) return Vec::Unit(dimension, dimension - 1);
  return axis.normalized();
}

bool PhaseRegion::admits(double v, double theta) const {
  if (!(v > v_lo && v < v_hi)) return false;
  if (theta < theta_guard || theta > std::numbers::pi - theta_guard) return false;
  for (double k : knots)
    if (std::abs(v - k) < knot_guard * k) return false;
  if (theta0 && std::abs(theta - theta0(v)) < theta0_guard) return false;
  return true;
}

PhaseRegion axial_region(const axial::AxialFieldSpec& spec) {
  PhaseRegion r;
  r.dimension = spec.dimension;
  r.axis = spec.axis_or_default();
  r.v_lo = spec.v0;
  r.v_hi = 3.0 * spec.v0;
  r.knots = {spec.knot(), spec.v0};
  r.theta0 = [spec](double v) { return axial::theta0(spec, v); };
  return r;
}

PhaseRegion plain_region(int dimension, const Vec& axis, double v_lo, double v_hi) {
  PhaseRegion r;
  r.dimension = dimension;
  r.axis = axis;
  r.v_lo = v_lo;
  r.v_hi = v_hi;
  return r;
}

namespace {

// Unit vector perpendicular to the axis, uniform on that sphere.
Vec random_perpendicular(Rng& rng, const Vec& axis) {
  const int n = static_cast<int>(axis.size());
  for (;;) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.normal();
    g -= g.dot(axis) * axis;
    const double len = g.norm();
    if (len > 1e-6) return g / len;
  }
}

}  // namespace

std::vector<PhasePoint> phase_samples(const PhaseRegion& region, std::size_t count, std::uint64_t seed) {
  if (region.dimension < 2) throw DomainError("phase samples need dimension >= 2");
  if (!(region.v_hi > region.v_lo) || !(region.v_lo > 0.0)) throw DomainError("empty speed interval");
  const Vec axis = region.axis_or_default();
  const int n = region.dimension;
  Rng rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 10)) throw DomainError("sampling region is (nearly) empty");
    const double v = rng.uniform(region.v_lo, region.v_hi);
    const double theta = rng.uniform(region.theta_guard, std::numbers::pi - region.theta_guard);
    const Vec perp = random_perpendicular(rng, axis);
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-region.x_extent, region.x_extent);
    if (!region.admits(v, theta)) continue;
    Vec vel = v * (std::cos(theta) * axis + std::sin(theta) * perp);
    out.emplace_back(std::move(x), std::move(vel));
  }
  return out;
}

PhasePoint lift_polar(const PhaseRegion& region, double v, double theta) {
  const Vec axis = region.axis_or_default();
  const int n = region.dimension;
  Vec e = Vec::Unit(n, 0);
  if (std::abs(e.dot(axis)) > 0.9) e = Vec::Unit(n, 1);
  e -= e.dot(axis) * axis;
  e.normalize();
  return {Vec::Zero(n), v * (std::cos(theta) * axis + std::sin(theta) * e)};
}

std::vector<std::pair<double, double>> polar_grid(const PhaseRegion& region, int nv, int ntheta) {
  if (nv < 1 || ntheta < 1) throw DomainError("grid needs at least one node per direction");
  std::vector<std::pair<double, double>> out;
  const double t_lo = region.theta_guard, t_hi = std::numbers::pi - region.theta_guard;
  for (int i = 0; i < nv; ++i) {
    // nodes strictly inside the open speed interval
    const double v = region.v_lo + (region.v_hi - region.v_lo) * (i + 0.5) / nv;
    for (int j = 0; j < ntheta; ++j) {
      const double th = ntheta == 1 ? 0.5 * (t_lo + t_hi) : t_lo + (t_hi - t_lo) * j / (ntheta - 1);
      if (region.admits(v, th)) out.emplace_back(v, th);
    }
  }
  return out;
}

double Polynomial::value(const Vec& v) const {
  double s = 0.0;
  for (const Term& t : terms) {
    double m = t.coefficient;
    for (int i = 0; i < dimension; ++i) m *= std::pow(v[i], t.exponents[i]);
    s += m;
  }
  return s;
}

Vec Polynomial::gradient(const Vec& v) const {
  Vec g = Vec::Zero(dimension);
  for (const Term& t : terms) {
    for (int k = 0; k < dimension; ++k) {
      if (t.exponents[k] == 0) continue;
      double m = t.coefficient * t.exponents[k];
      for (int i = 0; i < dimension; ++i) m *= std::pow(v[i], i == k ? t.exponents[i] - 1 : t.exponents[i]);
      g[k] += m;
    }
  }
  return g;
}

Polynomial random_polynomial(Rng& rng, int dimension, int degree) {
  Polynomial p;
  p.dimension = dimension;
  std::vector<int> e(dimension, 0);
  // enumerate exponent vectors in lexicographic order, keep total degree <= degree
  for (;;) {
    int total = 0;
    for (int x : e) total += x;
    if (total <= degree) p.terms.push_back({e, rng.uniform(-1.0, 1.0)});
    int i = dimension - 1;
    while (i >= 0 && e[i] == degree) e[i--] = 0;
    if (i < 0) break;
    ++e[i];
  }
  return p;
}

ScalarField polynomial_field(const Polynomial& p, const std::string& name) {
  ScalarField A;
  A.dimension = p.dimension;
  A.name = name;
  A.spatially_homogeneous = true;
  A.value = [p](const PhasePoint& q) { return p.value(q.v); };
  A.velocity_gradient = [p](const PhasePoint& q) { return p.gradient(q.v); };
  A.spatial_gradient = [n = p.dimension](const PhasePoint&) { return Vec::Zero(n); };
  return A;
}

}  // namespace nslab::sampling
