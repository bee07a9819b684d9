#pragma once

#include "nslab/types.hpp"

namespace nslab::geometry {

/// Unit velocity N = v/|v| and the projector P = I - N N^T onto the
/// hyperplane orthogonal to v.
struct UnitProjector {
  Vec N;
  Mat P;
};

UnitProjector unit_and_projector(const Vec& v);
inline UnitProjector unit_and_projector(const PhasePoint& p) { return unit_and_projector(p.v); }

/// Decomposition v = u n + w m with m the (unit) axis.
struct PolarVelocity {
  double v = 0.0;      // |v|
  double theta = 0.0;  // angle between v and the axis, in [0, pi]
  double u = 0.0;      // transverse speed, v sin(theta) >= 0
  double w = 0.0;      // axial speed, v cos(theta)
  Vec axis_n;          // m
  Vec n_dir;           // unit transverse direction; empty when u == 0
  bool has_transverse() const { return n_dir.size() > 0; }
};

/// Below this transverse speed (relative to |v|) the transverse direction
/// is reported as undefined.
inline constexpr double kOnAxisTolerance = 1e-14;

PolarVelocity polar_decompose(const Vec& v, const Vec& axis);

/// Chain rule from (v, theta) derivatives to (u, w) derivatives.
struct UWDerivatives {
  double A_u;
  double A_w;
};
struct VThetaDerivatives {
  double A_v;
  double A_theta;
};

UWDerivatives polar_first_derivatives(double A_v, double A_theta, double v, double theta);
VThetaDerivatives polar_first_derivatives_inverse(double A_u, double A_w, double v, double theta);

/// Unit vector in the (v, m) plane orthogonal to v pointing towards
/// increasing theta: (cos(theta) N - m) / sin(theta). Returns the zero
/// vector on the axis.
Vec theta_direction(const Vec& N, const Vec& axis);

/// theta = angle(v, axis) via atan2, accurate near 0 and pi.
double polar_angle(const Vec& v, const Vec& axis);

}  // namespace nslab::geometry
