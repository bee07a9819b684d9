#pragma once

#include "nslab/axial.hpp"
#include "nslab/fields.hpp"
#include "nslab/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace nslab::sampling {

/// Seeded generator with its own mappings to floating point, so a seed gives
/// the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Region of phase space to draw residual samples from.
struct PhaseRegion {
  int dimension = 3;
  Vec axis;                // unit; empty means e_n
  double v_lo = 1.0;       // open speed interval
  double v_hi = 3.0;
  double x_extent = 1.0;   // x uniform in the cube [-x_extent, x_extent]^n
  double theta_guard = 0.02;          // keep theta in [guard, pi - guard]
  std::vector<double> knots;          // speeds where the field loses smoothness
  double knot_guard = 0.02;           // relative distance kept from each knot
  std::function<double(double)> theta0;  // optional moving zero line theta0(v)
  double theta0_guard = 0.02;

  Vec axis_or_default() const;
  bool admits(double v, double theta) const;
};

/// Region used for the axial field: speeds in (v0, 3 v0) with both cutoff knots
/// and the zero line theta0(v) guarded.
PhaseRegion axial_region(const axial::AxialFieldSpec& spec);

/// Region for the comparison family and W-fields: speeds in (lo, hi), no knots.
PhaseRegion plain_region(int dimension, const Vec& axis, double v_lo, double v_hi);

/// `count` points by rejection inside the region. Speed and polar angle are
/// uniform; the direction around the axis is uniform on the sphere.
std::vector<PhasePoint> phase_samples(const PhaseRegion& region, std::size_t count, std::uint64_t seed);

/// Tensor grid of (v, theta) inside the region; points failing a guard are dropped.
std::vector<std::pair<double, double>> polar_grid(const PhaseRegion& region, int nv, int ntheta);

/// Lifts (v, theta) to a phase point with x = 0 and v in the plane of the
/// axis and the first basis vector not parallel to it.
PhasePoint lift_polar(const PhaseRegion& region, double v, double theta);

/// Polynomial in the velocity components, with analytic velocity gradient.
struct Polynomial {
  struct Term {
    std::vector<int> exponents;
    double coefficient = 0.0;
  };
  int dimension = 3;
  std::vector<Term> terms;

  double value(const Vec& v) const;
  Vec gradient(const Vec& v) const;
};

/// All monomials of degree <= `degree` with coefficients uniform in [-1, 1].
Polynomial random_polynomial(Rng& rng, int dimension, int degree);

/// A(x, v) = P(v).
ScalarField polynomial_field(const Polynomial& p, const std::string& name);

}  // namespace nslab::sampling
