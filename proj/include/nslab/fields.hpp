#pragma once

#include "nslab/finite_diff.hpp"
#include "nslab/types.hpp"

#include <functional>
#include <string>

namespace nslab {

/// Extended scalar field A(x, v). Analytic gradients are optional; when
/// absent the finite-difference engines are used.
struct ScalarField {
  int dimension = 3;
  std::string name;
  bool spatially_homogeneous = false;
  std::function<double(const PhasePoint&)> value;
  std::function<Vec(const PhasePoint&)> velocity_gradient;  // optional
  std::function<Vec(const PhasePoint&)> spatial_gradient;   // optional

  double operator()(const PhasePoint& p) const { return value(p); }
};

/// Extended vector field F(x, v) (the force of x'' = F(x, x')).
struct ForceField {
  int dimension = 3;
  std::string name;
  bool spatially_homogeneous = false;
  std::function<Vec(const PhasePoint&)> value;

  Vec operator()(const PhasePoint& p) const { return value(p); }
};

/// Gradient accessors: analytic when provided, central differences otherwise.
Vec velocity_gradient(const ScalarField& A, const PhasePoint& p, fd::FdOptions opt = {});
Vec spatial_gradient(const ScalarField& A, const PhasePoint& p, fd::FdOptions opt = {});

/// Second derivatives. With an analytic velocity gradient these difference
/// the gradient once; otherwise they use the direct second-order stencils.
Mat velocity_hessian(const ScalarField& A, const PhasePoint& p);
Mat mixed_hessian(const ScalarField& A, const PhasePoint& p);  // (r, s) = d_x^r d_v^s A

ScalarField constant_scalar(int dimension, double c);
ForceField zero_force(int dimension);
ForceField constant_force(const Vec& c);

}  // namespace nslab
