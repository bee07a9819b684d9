#pragma once

#include "nslab/axial.hpp"
#include "nslab/fields.hpp"
#include "nslab/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nslab::normality {

inline constexpr double kScaleFloor = 1e-12;
inline constexpr double kPassThreshold = 1e-4;
inline constexpr double kFailThreshold = 1e-2;

enum class Verdict { Pass, Inconclusive, Fail };
const char* verdict_name(Verdict v);
Verdict classify(double normalized);

/// One evaluation of an equation. `raw` holds the residual components
/// (flattened row-major for matrix equations); `scale` is the sum of the
/// magnitudes of the individual terms.
struct Residual {
  Vec raw;
  double raw_norm = 0.0;
  double scale = 0.0;
  double normalized = 0.0;
};

// Vector forms on a force field.
Residual weak_first(const ForceField& F, const PhasePoint& p);
Residual weak_second(const ForceField& F, const PhasePoint& p);
/// Both additional equations; raw is the stacked 2n x n matrix. The
/// normalized value is the larger of the two blocks' normalized norms.
Residual additional(const ForceField& F, const PhasePoint& p);

// Scalar forms.
Residual scalar(const ScalarField& A, const PhasePoint& p);
/// The scalar form with the spatial terms dropped; A must not depend on x.
Residual homogeneous(const ScalarField& A, const Vec& v);

using PolarFn = std::function<double(double v, double theta)>;

/// A A_t / v + A_t A_tt / v + A_t A_v - A A_vt, derivatives by fourth-order
/// central differences. A is continued evenly across theta = 0 and pi.
Residual polar(const PolarFn& A, double v, double theta);

/// b b_t - v b_v + b + b^3.
Residual b_equation(const PolarFn& b, double v, double theta);
Residual b_equation_closed(const axial::AxialFieldSpec& spec, double v, double theta);
/// z_t - v tan(z) z_v - 1.
Residual z_equation(const PolarFn& z, double v, double theta);
Residual z_equation_closed(const axial::AxialFieldSpec& spec, double v, double theta);

/// Fourth-order central differences of a function of (v, theta).
struct PolarDerivatives {
  double f = 0.0, f_v = 0.0, f_t = 0.0, f_tt = 0.0, f_vt = 0.0;
};
PolarDerivatives polar_derivatives(const PolarFn& fn, double v, double theta);

// ---------------------------------------------------------------------------
// Reports

enum class Equation { Weak1, Weak2, Additional, Scalar, Homogeneous, Polar };
const char* equation_id(Equation e);
Equation parse_equation(const std::string& id);

struct Sample {
  Vec x;
  Vec v;
  double v_mod = 0.0;
  double theta = 0.0;
  double raw_norm = 0.0;
  double scale = 0.0;
  double normalized = 0.0;
};

struct Summary {
  std::size_t count = 0;
  double max = 0.0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  Verdict verdict = Verdict::Pass;
  /// Fractions of samples at or below the pass threshold / at or above the fail threshold.
  double pass_fraction = 0.0;
  double fail_fraction = 0.0;
};

struct ResidualReport {
  std::string equation_id;
  std::string grid;
  std::vector<Sample> samples;

  /// PASS when every sample passes, FAIL when any sample fails, else
  /// INCONCLUSIVE. Throws DomainError("no samples") when empty.
  Summary summary() const;
};

/// The field under test in every representation a residual may need.
struct FieldBundle {
  ScalarField A;
  ForceField F;
  std::optional<PolarFn> polar;  // required by Equation::Polar
  Vec axis;                      // theta is measured from it
};

/// Evaluates one equation on all points (in parallel); samples keep input order.
ResidualReport evaluate(Equation eq, const FieldBundle& field, const std::vector<PhasePoint>& points,
                        const std::string& grid = "");

// ---------------------------------------------------------------------------
// Characteristics of the z equation: theta' = 1, z' = 1, v' = -v tan z.

struct CharacteristicState {
  double theta = 0.0;
  double z = 0.0;
  double v = 1.0;
  double t = 0.0;
};

struct CharacteristicFlow {
  std::vector<CharacteristicState> states;
  bool halted = false;  // |z| reached pi/2 - 1e-3
};

inline constexpr double kCharacteristicHalt = 1e-3;

/// Fixed-step classical RK4 from state0 to t_end (or until the halt).
CharacteristicFlow characteristic_flow(const CharacteristicState& state0, double t_end, double step);

struct FirstIntegrals {
  double I1;  // theta - z
  double I2;  // cos z / v
};
FirstIntegrals first_integrals(const CharacteristicState& s);

}  // namespace nslab::normality
