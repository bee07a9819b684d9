#pragma once

#include "nslab/expr.hpp"
#include "nslab/fields.hpp"
#include "nslab/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nslab::ansatz {

/// F = A N - |v| P grad_v A.
ForceField force_from_A(const ScalarField& A);
/// A = F . N.
ScalarField A_from_force(const ForceField& F);

// ---------------------------------------------------------------------------
// Fields of the closed family, described by W(x, v) and h(w).

/// One applied gauge W -> rho(W). `rho` is an expression in w.
struct Gauge {
  std::string text;
  expr::Expr rho;
  expr::Expr drho;
};

struct WFunctionSpec {
  int h = 0;  // h of the base spec, before gauges: 1 or 0
  std::string W_text;
  expr::Expr W;     // W after all gauges
  expr::Expr W_v;   // symbolic d/dv
  std::vector<expr::Expr> W_x;  // symbolic d/dx_i, one per dimension
  std::vector<Gauge> gauges;    // in order of application
  int dimension = 3;

  /// h after the gauges, as a function of w: h(rho^-1(w)) rho'(rho^-1(w)),
  /// with rho^-1 evaluated numerically.
  double h_of(double w) const;
};

/// Builds the spec and its symbolic derivatives. Throws SchemaError for bad
/// expressions or h outside {0, 1}.
WFunctionSpec make_w_spec(int h, const std::string& W, int dimension);

struct WValues {
  double W, W_v;
  Vec grad;
};
WValues w_values(const WFunctionSpec& spec, const PhasePoint& p);

/// A = h(W)/W_v - v N . grad W / W_v. Throws DomainError when W_v = 0.
double A_from_W(const WFunctionSpec& spec, const PhasePoint& p);
/// F_k = h(W) N_k / W_v - v sum_i grad_i W / W_v (2 N^i N_k - delta^i_k).
Vec force_from_W(const WFunctionSpec& spec, const PhasePoint& p);
/// B = (v . grad W) / W_v.
double b_sum(const WFunctionSpec& spec, const PhasePoint& p);

ScalarField scalar_field_from_W(const WFunctionSpec& spec);
ForceField force_field_from_W(const WFunctionSpec& spec);

/// W -> rho(W), h -> h(rho^-1) rho'(rho^-1). rho' must be positive on
/// [w_lo, w_hi], checked on a grid; h_of re-checks it where it inverts rho.
WFunctionSpec gauge_apply(const WFunctionSpec& spec, const std::string& rho, double w_lo = -10.0,
                          double w_hi = 10.0);

/// rho^-1(w) for an increasing rho: bracket expansion, then bisection/Newton.
double invert_increasing(const expr::Expr& rho, const expr::Expr& drho, double w);

// ---------------------------------------------------------------------------
// Axially symmetric members of the closed family: A = H(v) + C(v) cos(theta)
// (h = 1) or A = C(v) cos(theta) (h = 0).

struct MdTypeSpec {
  int h = 0;
  std::string C_text = "v^2";
  std::string H_text = "1";
  double kappa = 1.0;
  /// With h = 1 the default enforces C = kappa v H; `free` evaluates the
  /// given C unchanged.
  bool free = false;
  int dimension = 3;
  Vec axis;  // empty means e_n

  Vec axis_or_default() const;
  void validate() const;
};

struct MdTypeEval {
  double H, C, H_v, C_v;
};
MdTypeEval mdtype_coefficients(const MdTypeSpec& spec, double v);

double mdtype_axial_A(const MdTypeSpec& spec, double v, double theta);
/// A(x, v) = H(|v|) + C(|v|) (v . m) / |v|, with an analytic gradient.
ScalarField mdtype_field(const MdTypeSpec& spec);

// ---------------------------------------------------------------------------

struct CosFit {
  double H_hat = 0.0;
  double C_hat = 0.0;
  double relative_misfit = 0.0;
};

/// Least squares of A(theta_i) on span{1, cos theta}.
CosFit cos_fit(const std::vector<double>& theta, const std::vector<double>& values);
CosFit cos_fit(const std::function<double(double)>& A, const std::vector<double>& theta);

/// count points, evenly spaced on [0.02, pi - 0.02].
std::vector<double> cos_fit_grid(int count = 64);

}  // namespace nslab::ansatz
