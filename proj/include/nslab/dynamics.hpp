#pragma once

#include "nslab/expr.hpp"
#include "nslab/fields.hpp"
#include "nslab/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nslab::dynamics {

// x'' = F(x, x') in flat R^n, integrated as a first order system in (x, v).

struct TrajectoryState {
  double t = 0.0;
  Vec x;
  Vec v;
};

enum class Method { DormandPrince, RK4 };

struct IntegratorControls {
  Method method = Method::DormandPrince;
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_min = 1e-12;        // step-size underflow threshold
  double rk4_step = 1e-3;      // fixed step of RK4
  long max_steps = 2'000'000;
};

struct Trajectory {
  /// One state per requested output time (fewer when halted).
  std::vector<TrajectoryState> samples;
  bool ok = true;
  std::string diagnostic;
  long steps = 0;
  long rejected = 0;
  long evaluations = 0;
};

/// Integrates from state0 and reports the state at each time of `t_out`
/// (ascending, >= state0.t). Steps are shortened to land on the output
/// times exactly. Halts, with a diagnostic, on step-size underflow or when
/// the force cannot be evaluated (e.g. |v| -> 0).
Trajectory integrate_trajectory(const ForceField& F, const TrajectoryState& state0,
                                const std::vector<double>& t_out, const IntegratorControls& c = {});

// ---------------------------------------------------------------------------
// Wavefronts

/// Structured grid of initial points q with per-node trajectories.
struct WavefrontMesh {
  int dimension = 3;
  std::vector<int> shape;      // nodes per parameter direction
  std::vector<bool> periodic;  // per direction
  /// Direction whose ends are glued across a pole by reflection (n = 3
  /// sphere: latitude rows -1, -2 are rows 0, 1 shifted by half a turn).
  int pole_direction = -1;
  /// Rows near the ends of these directions are left out of the statistics.
  std::vector<bool> exclude_ends;
  std::vector<double> times;
  /// positions[k][node], velocities[k][node] at times[k]
  std::vector<std::vector<Vec>> positions;
  std::vector<std::vector<Vec>> velocities;
  std::vector<bool> node_ok;
  std::vector<std::string> node_diagnostic;
  double nu0 = 0.0;
  std::string description;

  std::size_t node_count() const;
  /// Multi-index of a node (first direction varies slowest).
  std::vector<int> index_of(std::size_t node) const;
  std::size_t node_of(const std::vector<int>& index) const;
};

struct MeshControls {
  /// n = 3: {latitudes, longitudes}; general n: n - 1 counts, the last
  /// angle periodic; n = 2: {points on the circle}. Longitudes must be even.
  std::vector<int> counts{64, 128};
  IntegratorControls integrator{};
};

/// Unit sphere grid of directions, cell-centred in the polar angles.
std::vector<Vec> sphere_directions(int dimension, const std::vector<int>& counts);

/// Blow-up of p0: x(0) = p0, v(0) = nu0 n(q) for every sphere node q.
WavefrontMesh blowup(const ForceField& F, const Vec& p0, double nu0, const MeshControls& mesh,
                     const std::vector<double>& t_list);

/// Hypersurface chart for shifts.
struct Chart {
  enum class Kind { Plane, Sphere } kind = Kind::Plane;
  Vec point;    // plane: a point on it; sphere: the centre
  Vec normal;   // plane: unit normal (orientation of the shift)
  double radius = 1.0;   // sphere
  double extent = 1.0;   // plane: parameters range over [-extent, extent]
};

/// Speed function on the surface: constant, or an expression in x1..xn.
struct SpeedFunction {
  double constant = 1.0;
  std::optional<expr::Expr> expression;
  double operator()(const Vec& x) const;
};

WavefrontMesh shift(const ForceField& F, const Chart& surface, const SpeedFunction& nu,
                    const MeshControls& mesh, const std::vector<double>& t_list);

struct OrthogonalityReport {
  double t = 0.0;
  double max_dev = 0.0;
  double mean_dev = 0.0;
  std::vector<double> per_node;  // NaN for excluded nodes
  std::size_t excluded = 0;      // failed, zero velocity, or degenerate tangent
};

/// Deviation of node i: max over parameter directions d of
/// |<v_i, tau_d>| / (|v_i| |tau_d|) with fourth-order difference tangents.
OrthogonalityReport orthogonality_report(const WavefrontMesh& mesh, std::size_t time_index);

/// For a spatially homogeneous field: the largest t <= t_cap (on a grid of
/// the given resolution) up to which every initial velocity keeps |v|
/// strictly inside (lo, hi). Integrates the velocity equation alone.
double speed_band_horizon(const ForceField& F, const std::vector<Vec>& initial_velocities, double lo,
                          double hi, double t_cap, double resolution = 1e-2);

// ---------------------------------------------------------------------------
// Output

/// Columns t, i1..ik (node indices), x1..xn, v1..vn, dev.
void write_wavefront_csv(const WavefrontMesh& mesh, const std::vector<OrthogonalityReport>& reports,
                         const std::string& path);

/// Axial-plane section (x_1, x_n) of the wavefronts with trajectory hairlines.
void write_wavefront_svg(const WavefrontMesh& mesh, const std::string& path);

}  // namespace nslab::dynamics
