#pragma once

#include "nslab/types.hpp"

#include <functional>

namespace nslab::fd {

using ScalarFn = std::function<double(const PhasePoint&)>;
using VectorFn = std::function<Vec(const PhasePoint&)>;
using Real1D = std::function<double(double)>;

/// Step control for the central-difference engines. The actual step is
/// h0 * max(1, |v|) (velocity) or h0 * max(1, |x|) (position). With
/// `richardson`, the step is halved once and the two estimates combined,
/// which lifts the order from 2 to 4.
struct FdOptions {
  double h0 = 1e-5;
  bool richardson = false;
};

/// Defaults tuned for second derivatives (larger step, rounding ~ eps/h^2).
inline constexpr FdOptions kSecondOrderDefaults{1e-4, false};

double derivative(const Real1D& g, double t, double h, bool richardson = false);
double second_derivative(const Real1D& g, double t, double h, bool richardson = false);

Vec fd_velocity_gradient(const ScalarFn& field, const PhasePoint& p, FdOptions opt = {});
Vec fd_spatial_gradient(const ScalarFn& field, const PhasePoint& p, FdOptions opt = {});

/// J(i, j) = dF_j / dv^i.
Mat fd_velocity_jacobian(const VectorFn& field, const PhasePoint& p, FdOptions opt = {});
/// J(i, j) = dF_j / dx^i.
Mat fd_spatial_jacobian(const VectorFn& field, const PhasePoint& p, FdOptions opt = {});

/// H(r, s) = d^2 A / dv^r dv^s, symmetric.
Mat fd_velocity_hessian(const ScalarFn& field, const PhasePoint& p,
                        FdOptions opt = kSecondOrderDefaults);
/// M(r, s) = d^2 A / dx^r dv^s.
Mat fd_mixed_hessian(const ScalarFn& field, const PhasePoint& p,
                     FdOptions opt = kSecondOrderDefaults);

/// Velocity step actually used at p, after shrinking away from v = 0.
double velocity_step(const PhasePoint& p, double h0);

}  // namespace nslab::fd
