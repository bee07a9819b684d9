#include "nslab/geometry.hpp"

#include <cmath>

namespace nslab::geometry {

UnitProjector unit_and_projector(const Vec& v) {
  const double speed = v.norm();
  if (!(speed > 0.0)) throw DomainError("field undefined at v=0");
  UnitProjector out;
  out.N = v / speed;
  out.P = Mat::Identity(v.size(), v.size()) - out.N * out.N.transpose();
  return out;
}

double polar_angle(const Vec& v, const Vec& axis) {
  const double w = v.dot(axis);
  const double u = (v - w * axis).norm();
  return std::atan2(u, w);
}

PolarVelocity polar_decompose(const Vec& v, const Vec& axis) {
  const double speed = v.norm();
  if (!(speed > 0.0)) throw DomainError("field undefined at v=0");
  if (std::abs(axis.norm() - 1.0) > 1e-12) throw DomainError("axis must be a unit vector");

  PolarVelocity out;
  out.v = speed;
  out.w = v.dot(axis);
  const Vec transverse = v - out.w * axis;
  out.u = transverse.norm();
  out.theta = std::atan2(out.u, out.w);
  out.axis_n = axis;
  if (out.u > kOnAxisTolerance * speed) out.n_dir = transverse / out.u;
  return out;
}

UWDerivatives polar_first_derivatives(double A_v, double A_theta, double v, double theta) {
  if (!(v > 0.0)) throw DomainError("polar derivatives need v > 0");
  const double s = std::sin(theta), c = std::cos(theta);
  return {A_v * s + A_theta * c / v, A_v * c - A_theta * s / v};
}

VThetaDerivatives polar_first_derivatives_inverse(double A_u, double A_w, double v, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  return {A_u * s + A_w * c, v * (A_u * c - A_w * s)};
}

Vec theta_direction(const Vec& N, const Vec& axis) {
  // -(m - (m.N) N), normalized; its norm is sin(theta).
  Vec d = N * N.dot(axis) - axis;
  const double len = d.norm();
  if (len < 1e-300) return Vec::Zero(N.size());
  return d / len;
}

}  // namespace nslab::geometry
