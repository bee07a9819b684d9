#include "nslab/quadrature.hpp"

#include "nslab/simd.hpp"
#include "nslab/types.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace nslab::quad {

namespace {

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = GK::abscissa();   // 8 non-negative nodes, x[0] = 0
  const auto& wk = GK::weights();   // Kronrod weights
  const auto& wg = G::weights();    // Gauss weights on x[0], x[2], x[4], x[6]
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);

  const double f0 = f(mid);
  double kronrod = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fs = f(mid - half * x[i]) + f(mid + half * x[i]);
    kronrod += wk[i] * fs;
    if (i % 2 == 0) gauss += wg[i / 2] * fs;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_intervals) {
  QuadResult out;
  if (a == b) return out;

  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  out.evaluations = 15;
  double total = first.value, error = first.error;

  while (error > abs_tol) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << total
          << ", error " << error << " > " << abs_tol << " after " << heap.size() << " intervals";
      throw NumericError(msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, m);
    const Segment right = gk15(f, m, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the incremental updates.
  total = 0.0;
  error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error_estimate = error;
  return out;
}

GaussLegendre30::GaussLegendre30() {
  using G = boost::math::quadrature::gauss<double, kPoints>;
  const auto& x = G::abscissa();  // 15 positive nodes for even N
  const auto& w = G::weights();
  const int half = kPoints / 2;
  for (int i = 0; i < half; ++i) {
    nodes_[half - 1 - i] = -x[i];
    nodes_[half + i] = x[i];
    weights_[half - 1 - i] = w[i];
    weights_[half + i] = w[i];
  }
}

double GaussLegendre30::weighted_sum(const std::array<double, kPoints>& values) const {
  return simd::dot(values, weights_);
}

const GaussLegendre30& GaussLegendre30::instance() {
  static const GaussLegendre30 rule;
  return rule;
}

}  // namespace nslab::quad
