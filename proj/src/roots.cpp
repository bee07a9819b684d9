#include "nslab/roots.hpp"

#include "nslab/types.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nslab::roots {

RootResult bracketed_newton(const std::function<double(double)>& g,
                            const std::function<double(double)>& dg, double lo, double hi,
                            BracketOptions opt) {
  double glo = g(lo);
  double ghi = g(hi);
  RootResult out;
  if (glo == 0.0) return {lo, 0.0, 0};
  if (ghi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(glo) == std::signbit(ghi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]: g(lo)=" << glo << ", g(hi)=" << ghi;
    throw NumericError(msg.str());
  }

  while (hi - lo > opt.bisect_width) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    ++out.iterations;
    if (gm == 0.0) return {mid, 0.0, out.iterations};
    if (std::signbit(gm) == std::signbit(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }

  double x = 0.5 * (lo + hi);
  double gx = g(x);
  double best = x, best_g = gx;
  for (int it = 0; it < opt.max_newton && gx != 0.0; ++it) {
    ++out.iterations;
    if (std::signbit(gx) == std::signbit(glo)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
      ghi = gx;
    }
    const double slope = dg(x);
    double next = x - gx / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    gx = g(x);
    if (std::abs(gx) < std::abs(best_g)) {
      best = x;
      best_g = gx;
    }
    if (step <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  out.root = best;
  out.residual = best_g;
  return out;
}

}  // namespace nslab::roots
