#pragma once

#include <string>

namespace nslab::axial {

enum class ProfileKind { Log, Sqrt };

/// Profile y = f(w) on [0, inf) of the implicit relation theta - z = f(cos z / v):
///   log:  f(w) = pi/2 + alpha ln(1 + beta w),        f'(0) = alpha beta
///   sqrt: f(w) = pi/2 + alpha (sqrt(1 + beta w) - 1), f'(0) = alpha beta / 2
/// Both are increasing, concave and unbounded with f(0) = pi/2.
class AxialProfile {
 public:
  AxialProfile(ProfileKind kind, double alpha, double beta);

  ProfileKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double f(double w) const;
  double fp(double w) const;
  double fpp(double w) const;
  /// f(w0 + dw) - f(w0) without cancellation for small dw.
  double f_diff(double w0, double dw) const;

  /// f'(0); the lower bound of the admissible speeds.
  double v_min() const { return fp(0.0); }

  /// Sampled check of: f(0) = pi/2, f' > 0, f' decreasing, f(1e6) > f(0) + 5.
  /// Returns an empty string when all hold, else a description.
  std::string check_properties() const;

  static ProfileKind parse_kind(const std::string& s);
  static const char* kind_name(ProfileKind k);

 private:
  ProfileKind kind_;
  double alpha_;
  double beta_;
};

}  // namespace nslab::axial
