#include "nslab/profile.hpp"

#include "nslab/types.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nslab::axial {

AxialProfile::AxialProfile(ProfileKind kind, double alpha, double beta)
    : kind_(kind), alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("profile shape parameters alpha, beta must be positive and finite");
}

double AxialProfile::f(double w) const {
  constexpr double half_pi = std::numbers::pi / 2;
  switch (kind_) {
    case ProfileKind::Log: return half_pi + alpha_ * std::log1p(beta_ * w);
    case ProfileKind::Sqrt: {
      // sqrt(1 + b w) - 1 = b w / (sqrt(1 + b w) + 1)
      const double bw = beta_ * w;
      return half_pi + alpha_ * bw / (std::sqrt(1.0 + bw) + 1.0);
    }
  }
  return half_pi;
}

double AxialProfile::fp(double w) const {
  switch (kind_) {
    case ProfileKind::Log: return alpha_ * beta_ / (1.0 + beta_ * w);
    case ProfileKind::Sqrt: return 0.5 * alpha_ * beta_ / std::sqrt(1.0 + beta_ * w);
  }
  return 0.0;
}

double AxialProfile::fpp(double w) const {
  switch (kind_) {
    case ProfileKind::Log: {
      const double d = 1.0 + beta_ * w;
      return -alpha_ * beta_ * beta_ / (d * d);
    }
    case ProfileKind::Sqrt: {
      const double d = 1.0 + beta_ * w;
      return -0.25 * alpha_ * beta_ * beta_ / (d * std::sqrt(d));
    }
  }
  return 0.0;
}

double AxialProfile::f_diff(double w0, double dw) const {
  const double w1 = w0 + dw;
  switch (kind_) {
    case ProfileKind::Log: return alpha_ * std::log1p(beta_ * dw / (1.0 + beta_ * w0));
    case ProfileKind::Sqrt:
      return alpha_ * beta_ * dw / (std::sqrt(1.0 + beta_ * w1) + std::sqrt(1.0 + beta_ * w0));
  }
  return 0.0;
}

std::string AxialProfile::check_properties() const {
  std::ostringstream err;
  if (std::abs(f(0.0) - std::numbers::pi / 2) != 0.0) err << "f(0) != pi/2; ";
  double prev = fp(0.0);
  if (!(prev > 0.0)) err << "f'(0) <= 0; ";
  // log grid 1e-6 .. 1e6
  for (int k = -60; k <= 60; ++k) {
    const double w = std::pow(10.0, k / 10.0);
    const double d = fp(w);
    if (!(d > 0.0)) {
      err << "f'(" << w << ") <= 0; ";
      break;
    }
    if (!(d < prev)) {
      err << "f' not decreasing at w=" << w << "; ";
      break;
    }
    prev = d;
  }
  if (!(f(1e6) > f(0.0) + 5.0)) err << "f(1e6) <= f(0) + 5 (profile too flat to be unbounded); ";
  return err.str();
}

ProfileKind AxialProfile::parse_kind(const std::string& s) {
  if (s == "log") return ProfileKind::Log;
  if (s == "sqrt") return ProfileKind::Sqrt;
  throw DomainError("unknown profile kind '" + s + "' (expected log or sqrt)");
}

const char* AxialProfile::kind_name(ProfileKind k) { return k == ProfileKind::Log ? "log" : "sqrt"; }

}  // namespace nslab::axial
