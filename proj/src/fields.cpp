#include "nslab/fields.hpp"

namespace nslab {

Vec velocity_gradient(const ScalarField& A, const PhasePoint& p, fd::FdOptions opt) {
  if (A.velocity_gradient) return A.velocity_gradient(p);
  return fd::fd_velocity_gradient(A.value, p, opt);
}

Vec spatial_gradient(const ScalarField& A, const PhasePoint& p, fd::FdOptions opt) {
  if (A.spatially_homogeneous) return Vec::Zero(p.dimension());
  if (A.spatial_gradient) return A.spatial_gradient(p);
  return fd::fd_spatial_gradient(A.value, p, opt);
}

Mat velocity_hessian(const ScalarField& A, const PhasePoint& p) {
  if (A.velocity_gradient) {
    Mat H = fd::fd_velocity_jacobian(A.velocity_gradient, p);
    return 0.5 * (H + H.transpose());
  }
  return fd::fd_velocity_hessian(A.value, p);
}

Mat mixed_hessian(const ScalarField& A, const PhasePoint& p) {
  const int n = p.dimension();
  if (A.spatially_homogeneous) return Mat::Zero(n, n);
  if (A.velocity_gradient) return fd::fd_spatial_jacobian(A.velocity_gradient, p);
  return fd::fd_mixed_hessian(A.value, p);
}

ScalarField constant_scalar(int dimension, double c) {
  ScalarField A;
  A.dimension = dimension;
  A.name = "constant";
  A.spatially_homogeneous = true;
  A.value = [c](const PhasePoint&) { return c; };
  A.velocity_gradient = [dimension](const PhasePoint&) { return Vec(Vec::Zero(dimension)); };
  return A;
}

ForceField zero_force(int dimension) {
  ForceField F;
  F.dimension = dimension;
  F.name = "zero";
  F.spatially_homogeneous = true;
  F.value = [dimension](const PhasePoint&) { return Vec(Vec::Zero(dimension)); };
  return F;
}

ForceField constant_force(const Vec& c) {
  ForceField F;
  F.dimension = static_cast<int>(c.size());
  F.name = "constant";
  F.spatially_homogeneous = true;
  F.value = [c](const PhasePoint&) { return c; };
  return F;
}

}  // namespace nslab
