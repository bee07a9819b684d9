#include "nslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nslab::dynamics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class System {
 public:
  System(const ForceField& F, const Vec& x0, int n) : F_(F), n_(n), p_(x0, x0) {}

  // y = (x, v); y' = (v, F(x, v))
  Vec rhs(double, const Vec& y) {
    ++evaluations;
    p_.x = y.head(n_);
    p_.v = y.tail(n_);
    Vec out(2 * n_);
    out.head(n_) = p_.v;
    out.tail(n_) = F_(p_);
    if (!out.allFinite()) throw NumericError("force is not finite");
    return out;
  }

  long evaluations = 0;

 private:
  const ForceField& F_;
  int n_;
  PhasePoint p_;
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

TrajectoryState unpack(double t, const Vec& y, int n) { return {t, y.head(n), y.tail(n)}; }

}  // namespace

Trajectory integrate_trajectory(const ForceField& F, const TrajectoryState& state0,
                                const std::vector<double>& t_out, const IntegratorControls& c) {
  const int n = static_cast<int>(state0.x.size());
  if (state0.v.size() != n) throw DomainError("state dimension mismatch");
  if (!(state0.v.norm() > 0.0)) throw DomainError("initial velocity must be nonzero");
  for (std::size_t k = 0; k < t_out.size(); ++k) {
    if (t_out[k] < state0.t || (k > 0 && t_out[k] < t_out[k - 1]))
      throw DomainError("output times must be ascending and not before the start");
  }

  Trajectory tr;
  System sys(F, state0.x, n);
  Vec y(2 * n);
  y << state0.x, state0.v;
  double t = state0.t;

  auto finish = [&](const std::string& why) {
    tr.ok = false;
    std::ostringstream msg;
    msg << why << " at t=" << t << " |v|=" << y.tail(n).norm();
    tr.diagnostic = msg.str();
    tr.evaluations = sys.evaluations;
    return tr;
  };

  try {
    if (c.method == Method::RK4) {
      for (double target : t_out) {
        while (t < target) {
          const double h = std::min(c.rk4_step, target - t);
          const Vec k1 = sys.rhs(t, y);
          const Vec k2 = sys.rhs(t + 0.5 * h, y + 0.5 * h * k1);
          const Vec k3 = sys.rhs(t + 0.5 * h, y + 0.5 * h * k2);
          const Vec k4 = sys.rhs(t + h, y + h * k3);
          y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          // snap to the target to avoid a sliver step from rounding
          t = (target - (t + h) < 1e-12 * std::max(1.0, std::abs(target))) ? target : t + h;
          ++tr.steps;
        }
        tr.samples.push_back(unpack(target, y, n));
      }
      tr.evaluations = sys.evaluations;
      return tr;
    }

    Vec k1 = sys.rhs(t, y);
    // Initial step from the scales of y and y'.
    double h;
    {
      double d0 = 0.0, d1 = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = c.atol + c.rtol * std::abs(y[i]);
        d0 = std::max(d0, std::abs(y[i]) / sc);
        d1 = std::max(d1, std::abs(k1[i]) / sc);
      }
      h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
      h = std::min(h, 0.1);
    }

    for (double target : t_out) {
      while (t < target) {
        if (tr.steps + tr.rejected > c.max_steps) return finish("step budget exhausted");
        bool last = false;
        double step = h;
        if (t + step >= target) {
          step = target - t;
          last = true;
        }
        const Vec k2 = sys.rhs(t + c2 * step, y + step * (a21 * k1));
        const Vec k3 = sys.rhs(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
        const Vec k4 = sys.rhs(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 =
            sys.rhs(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = sys.rhs(t + step,
                               y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y1 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = sys.rhs(t + step, y1);
        const Vec err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, y1, c.atol, c.rtol);
        const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (en <= 1.0) {
          t = last ? target : t + step;
          y = y1;
          k1 = k7;  // first-same-as-last
          ++tr.steps;
          // keep the controller's step when the last one was shortened to land on target
          if (!last || step >= h) h = step * factor;
        } else {
          ++tr.rejected;
          h = step * factor;
          if (h < c.h_min) return finish("step-size underflow");
        }
      }
      tr.samples.push_back(unpack(target, y, n));
    }
  } catch (const DomainError& e) {
    return finish(std::string("force undefined (") + e.what() + ")");
  } catch (const NumericError& e) {
    return finish(std::string("numeric failure (") + e.what() + ")");
  }
  tr.evaluations = sys.evaluations;
  return tr;
}

}  // namespace nslab::dynamics
