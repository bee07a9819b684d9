#pragma once

#include "nslab/fields.hpp"
#include "nslab/profile.hpp"
#include "nslab/types.hpp"

namespace nslab::axial {

/// Everything that determines the axial solution A(v, theta) and its force.
struct AxialFieldSpec {
  AxialProfile profile{ProfileKind::Log, 1.0, 1.0};
  double v0 = 3.0;
  double cutoff_margin = 0.05;
  int dimension = 3;
  Vec axis;  // unit; empty means e_n

  double v_min() const { return profile.v_min(); }
  /// Lower knot of the cutoff, v_min (1 + delta).
  double knot() const { return v_min() * (1.0 + cutoff_margin); }
  /// The axis, defaulting to the last basis vector.
  Vec axis_or_default() const;
  /// Throws DomainError on violated invariants.
  void validate() const;
};

AxialFieldSpec canonical_spec(ProfileKind kind = ProfileKind::Log);

/// Root z in [-pi/2, pi/2] of theta - z = f(cos z / v). Requires v > v_min.
double solve_z(const AxialFieldSpec& spec, double v, double theta);

/// theta0(v) = f(1/v), the zero of z(v, .). Throws when it is not below pi.
double theta0(const AxialFieldSpec& spec, double v);

/// Implicit derivatives of z at a point of the solution graph.
double z_theta(const AxialFieldSpec& spec, double v, double z);
double z_v(const AxialFieldSpec& spec, double v, double z);

/// b = cot z. Throws DomainError within 1e-9 of theta0.
double b_eval(const AxialFieldSpec& spec, double v, double theta);
inline constexpr double kPoleGuard = 1e-9;

/// Root z of e - z - (f(cos z / v) - f(1/v)) = 0, i.e. z at theta = theta0 + e,
/// accurate relative to e when e is small.
double solve_z_offset(const AxialFieldSpec& spec, double v, double e);

/// b(theta0 + e) - 1/e, finite through e = 0.
double pole_subtracted_b(const AxialFieldSpec& spec, double v, double e);

struct VpIntegral {
  double S = 0.0;           // int_0^theta [b - 1/(tau - theta0)] dtau
  double principal = 0.0;   // v.p. int_0^theta b dtau
  double error_estimate = 0.0;
  int evaluations = 0;
};
VpIntegral regularized_vp_integral(const AxialFieldSpec& spec, double v, double theta,
                                   double abs_tol = 1e-9);

/// Quintic smoothstep from 0 at knot() to 1 at v0, and its derivative.
double cutoff_C(const AxialFieldSpec& spec, double v);
double cutoff_dC(const AxialFieldSpec& spec, double v);

/// A and its first derivatives in (v, theta).
struct PolarJet {
  double A = 0.0;
  double A_v = 0.0;
  double A_theta = 0.0;
  /// A_theta / sin(theta), continued to the axis.
  double A_theta_over_sin = 0.0;
  double z = 0.0;
};

/// A(v, theta) = C(v) sin z exp(-J), J = int_{-pi/2}^{z} f'(cos s / v) cos s / v ds.
/// Equal to C sign(theta - theta0) |theta - theta0| / theta0 exp(S).
/// `with_v = false` skips A_v (left 0), which needs a second integral.
PolarJet A_polar_jet(const AxialFieldSpec& spec, double v, double theta, bool with_v = true);
double A_polar(const AxialFieldSpec& spec, double v, double theta);

/// The same A through the adaptive pole-subtracted integral; slow, for cross-checks.
double A_polar_by_quadrature(const AxialFieldSpec& spec, double v, double theta,
                             double abs_tol = 1e-9);

/// A(x, v) = A_polar(|v|, angle(v, axis)) with an analytic velocity gradient.
ScalarField lift_to_field(const AxialFieldSpec& spec);

/// The force of the lifted field, F = A N + (A_theta / sin(theta)) (m - cos(theta) N),
/// from one evaluation of the solution. Equal to the scalar ansatz applied to
/// lift_to_field(spec); used where the force is evaluated many times.
ForceField force_field(const AxialFieldSpec& spec);

}  // namespace nslab::axial
