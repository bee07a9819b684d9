#pragma once

#include <functional>

namespace nslab::roots {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // g(root)
  int iterations = 0;
};

struct BracketOptions {
  double bisect_width = 1e-6;  // bisect until the bracket is this narrow
  int max_newton = 60;
};

/// Root of g on [lo, hi] given a sign change g(lo) * g(hi) <= 0.
/// Bisection narrows the bracket to `bisect_width`, then Newton polishes;
/// a Newton step that leaves the bracket is replaced by bisection.
/// Throws NumericError when there is no sign change.
RootResult bracketed_newton(const std::function<double(double)>& g,
                            const std::function<double(double)>& dg, double lo, double hi,
                            BracketOptions opt = {});

}  // namespace nslab::roots
