#include "nslab/finite_diff.hpp"

#include <algorithm>
#include <cmath>

namespace nslab::fd {

namespace {

double central(const Real1D& g, double t, double h) { return (g(t + h) - g(t - h)) / (2.0 * h); }

double central2(const Real1D& g, double t, double h, double g0) {
  return (g(t + h) - 2.0 * g0 + g(t - h)) / (h * h);
}

double spatial_step(const PhasePoint& p, double h0) { return h0 * std::max(1.0, p.x.norm()); }

}  // namespace

double derivative(const Real1D& g, double t, double h, bool richardson) {
  const double d1 = central(g, t, h);
  if (!richardson) return d1;
  const double d2 = central(g, t, 0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

double second_derivative(const Real1D& g, double t, double h, bool richardson) {
  const double g0 = g(t);
  const double d1 = central2(g, t, h, g0);
  if (!richardson) return d1;
  const double d2 = central2(g, t, 0.5 * h, g0);
  return (4.0 * d2 - d1) / 3.0;
}

double velocity_step(const PhasePoint& p, double h0) {
  const double speed = p.v.norm();
  if (!(speed > 0.0)) throw DomainError("field undefined at v=0");
  double h = h0 * std::max(1.0, speed);
  // Stencil points reach as far as 2h (mixed/second stencils); keep them
  // well clear of the origin of velocity space.
  if (2.0 * h >= 0.5 * speed) h = 0.125 * speed;
  if (!(h > 0.0)) throw DomainError("finite-difference stencil crosses v=0");
  return h;
}

Vec fd_velocity_gradient(const ScalarFn& field, const PhasePoint& p, FdOptions opt) {
  const int n = p.dimension();
  const double h = velocity_step(p, opt.h0);
  Vec grad(n);
  PhasePoint q = p;
  for (int i = 0; i < n; ++i) {
    const double base = p.v[i];
    grad[i] = derivative(
        [&](double s) {
          q.v[i] = s;
          return field(q);
        },
        base, h, opt.richardson);
    q.v[i] = base;
  }
  return grad;
}

Vec fd_spatial_gradient(const ScalarFn& field, const PhasePoint& p, FdOptions opt) {
  const int n = p.dimension();
  const double h = spatial_step(p, opt.h0);
  Vec grad(n);
  PhasePoint q = p;
  for (int i = 0; i < n; ++i) {
    const double base = p.x[i];
    grad[i] = derivative(
        [&](double s) {
          q.x[i] = s;
          return field(q);
        },
        base, h, opt.richardson);
    q.x[i] = base;
  }
  return grad;
}

namespace {

template <bool Velocity>
Mat jacobian(const VectorFn& field, const PhasePoint& p, FdOptions opt) {
  const int n = p.dimension();
  const double h = Velocity ? velocity_step(p, opt.h0) : spatial_step(p, opt.h0);
  PhasePoint q = p;
  Vec& coord = Velocity ? q.v : q.x;
  const Vec& base = Velocity ? p.v : p.x;

  auto diff = [&](int i, double step) -> Vec {
    coord[i] = base[i] + step;
    Vec fp = field(q);
    coord[i] = base[i] - step;
    Vec fm = field(q);
    coord[i] = base[i];
    return (fp - fm) / (2.0 * step);
  };

  Mat J;
  for (int i = 0; i < n; ++i) {
    Vec row = diff(i, h);
    if (opt.richardson) row = (4.0 * diff(i, 0.5 * h) - row) / 3.0;
    if (J.size() == 0) J.resize(n, row.size());
    J.row(i) = row.transpose();
  }
  return J;
}

}  // namespace

Mat fd_velocity_jacobian(const VectorFn& field, const PhasePoint& p, FdOptions opt) {
  return jacobian<true>(field, p, opt);
}

Mat fd_spatial_jacobian(const VectorFn& field, const PhasePoint& p, FdOptions opt) {
  return jacobian<false>(field, p, opt);
}

namespace {

// Second-order central Hessian with step h.
Mat hessian_once(const ScalarFn& field, const PhasePoint& p, double h) {
  const int n = p.dimension();
  PhasePoint q = p;
  const double f0 = field(p);
  Mat H(n, n);
  for (int r = 0; r < n; ++r) {
    q.v[r] = p.v[r] + h;
    const double fp = field(q);
    q.v[r] = p.v[r] - h;
    const double fm = field(q);
    q.v[r] = p.v[r];
    H(r, r) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      double acc = 0.0;
      for (int a = -1; a <= 1; a += 2) {
        for (int b = -1; b <= 1; b += 2) {
          q.v[r] = p.v[r] + a * h;
          q.v[s] = p.v[s] + b * h;
          acc += a * b * field(q);
        }
      }
      q.v[r] = p.v[r];
      q.v[s] = p.v[s];
      H(r, s) = H(s, r) = acc / (4.0 * h * h);
    }
  }
  return H;
}

Mat mixed_once(const ScalarFn& field, const PhasePoint& p, double hx, double hv) {
  const int n = p.dimension();
  PhasePoint q = p;
  Mat M(n, n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      double acc = 0.0;
      for (int a = -1; a <= 1; a += 2) {
        for (int b = -1; b <= 1; b += 2) {
          q.x[r] = p.x[r] + a * hx;
          q.v[s] = p.v[s] + b * hv;
          acc += a * b * field(q);
        }
      }
      q.x[r] = p.x[r];
      q.v[s] = p.v[s];
      M(r, s) = acc / (4.0 * hx * hv);
    }
  }
  return M;
}

}  // namespace

Mat fd_velocity_hessian(const ScalarFn& field, const PhasePoint& p, FdOptions opt) {
  const double h = velocity_step(p, opt.h0);
  Mat H = hessian_once(field, p, h);
  if (opt.richardson) H = (4.0 * hessian_once(field, p, 0.5 * h) - H) / 3.0;
  return H;
}

Mat fd_mixed_hessian(const ScalarFn& field, const PhasePoint& p, FdOptions opt) {
  const double hv = velocity_step(p, opt.h0);
  const double hx = spatial_step(p, opt.h0);
  Mat M = mixed_once(field, p, hx, hv);
  if (opt.richardson) M = (4.0 * mixed_once(field, p, 0.5 * hx, 0.5 * hv) - M) / 3.0;
  return M;
}

}  // namespace nslab::fd
