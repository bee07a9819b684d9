#pragma once

#include <array>
#include <functional>

namespace nslab::quad {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature to an absolute error
/// target. Throws NumericError (with the achieved estimate) when the
/// interval budget is exhausted.
QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_intervals = 4000);

/// Fixed 30-point Gauss-Legendre rule. Being a fixed rule, its value is a
/// smooth function of the integrand parameters and of the limits, which is
/// what finite differences of quadrature-defined fields need.
class GaussLegendre30 {
 public:
  static constexpr int kPoints = 30;

  GaussLegendre30();

  /// Nodes on [-1, 1] in ascending order, with matching weights.
  const std::array<double, kPoints>& nodes() const { return nodes_; }
  const std::array<double, kPoints>& weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    std::array<double, kPoints> values;
    for (int i = 0; i < kPoints; ++i) values[i] = f(mid + half * nodes_[i]);
    return half * weighted_sum(values);
  }

  double weighted_sum(const std::array<double, kPoints>& values) const;

  static const GaussLegendre30& instance();

 private:
  std::array<double, kPoints> nodes_{};
  std::array<double, kPoints> weights_{};
};

}  // namespace nslab::quad
