#include "nslab/dynamics.hpp"

#include "nslab/parallel.hpp"
#include "nslab/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace nslab::dynamics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_counts(int dimension, const std::vector<int>& counts) {
  const std::size_t want = dimension == 3 ? 2 : static_cast<std::size_t>(dimension - 1);
  if (counts.size() != want) {
    std::ostringstream msg;
    msg << "mesh needs " << want << " counts for dimension " << dimension << ", got " << counts.size();
    throw DomainError(msg.str());
  }
  for (int c : counts)
    if (c < 3) throw DomainError("mesh needs at least 3 nodes per parameter direction");
}

struct SphereLayout {
  std::vector<int> shape;
  std::vector<bool> periodic;
  std::vector<bool> exclude_ends;
  int pole_direction = -1;
};

SphereLayout sphere_layout(int dimension, const std::vector<int>& counts) {
  check_counts(dimension, counts);
  SphereLayout l;
  l.shape = counts;
  l.periodic.assign(counts.size(), false);
  l.periodic.back() = true;
  l.exclude_ends.assign(counts.size(), false);
  if (dimension == 3) {
    if (counts[1] % 2 != 0) throw DomainError("longitude count must be even");
    l.pole_direction = 0;
  } else if (dimension > 3) {
    for (std::size_t d = 0; d + 1 < counts.size(); ++d) l.exclude_ends[d] = true;
  }
  return l;
}

void run_nodes(WavefrontMesh& mesh, const ForceField& F, const std::vector<TrajectoryState>& starts,
               const IntegratorControls& controls) {
  const std::size_t count = starts.size();
  const std::size_t nt = mesh.times.size();
  const int n = mesh.dimension;
  mesh.positions.assign(nt, std::vector<Vec>(count));
  mesh.velocities.assign(nt, std::vector<Vec>(count));
  mesh.node_ok.assign(count, true);
  mesh.node_diagnostic.assign(count, "");
  // vector<bool> is not safe for concurrent writes
  std::vector<char> ok(count, 1);
  parallel_for(count, [&](std::size_t i) {
    Trajectory tr;
    try {
      tr = integrate_trajectory(F, starts[i], mesh.times, controls);
    } catch (const std::exception& e) {
      tr.ok = false;
      tr.diagnostic = e.what();
    }
    for (std::size_t k = 0; k < nt; ++k) {
      if (k < tr.samples.size()) {
        mesh.positions[k][i] = tr.samples[k].x;
        mesh.velocities[k][i] = tr.samples[k].v;
      } else {
        mesh.positions[k][i] = Vec::Constant(n, kNaN);
        mesh.velocities[k][i] = Vec::Constant(n, kNaN);
      }
    }
    if (!tr.ok) {
      ok[i] = 0;
      mesh.node_diagnostic[i] = tr.diagnostic;
    }
  });
  for (std::size_t i = 0; i < count; ++i) mesh.node_ok[i] = ok[i] != 0;
}

// Orthonormal basis of the complement of a unit normal.
std::vector<Vec> tangent_basis(const Vec& normal) {
  const int n = static_cast<int>(normal.size());
  Mat M(n, n);
  M.col(0) = normal;
  int col = 1;
  for (int i = 0; i < n && col < n; ++i) {
    Vec e = Vec::Unit(n, i);
    for (int c = 0; c < col; ++c) e -= e.dot(M.col(c)) * M.col(c);
    if (e.norm() > 1e-6) M.col(col++) = e.normalized();
  }
  std::vector<Vec> basis;
  for (int c = 1; c < n; ++c) basis.push_back(M.col(c));
  return basis;
}

}  // namespace

std::size_t WavefrontMesh::node_count() const {
  std::size_t c = 1;
  for (int s : shape) c *= static_cast<std::size_t>(s);
  return c;
}

std::vector<int> WavefrontMesh::index_of(std::size_t node) const {
  std::vector<int> idx(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    idx[d] = static_cast<int>(node % static_cast<std::size_t>(shape[d]));
    node /= static_cast<std::size_t>(shape[d]);
  }
  return idx;
}

std::size_t WavefrontMesh::node_of(const std::vector<int>& index) const {
  std::size_t node = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) node = node * static_cast<std::size_t>(shape[d]) + index[d];
  return node;
}

std::vector<Vec> sphere_directions(int dimension, const std::vector<int>& counts) {
  check_counts(dimension, counts);
  std::vector<Vec> dirs;
  if (dimension == 2) {
    for (int j = 0; j < counts[0]; ++j) {
      const double phi = kTwoPi * j / counts[0];
      Vec d(2);
      d << std::cos(phi), std::sin(phi);
      dirs.push_back(d);
    }
    return dirs;
  }
  if (dimension == 3) {
    for (int i = 0; i < counts[0]; ++i) {
      const double th = std::numbers::pi * (i + 0.5) / counts[0];
      for (int j = 0; j < counts[1]; ++j) {
        const double phi = kTwoPi * j / counts[1];
        Vec d(3);
        d << std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th);
        dirs.push_back(d);
      }
    }
    return dirs;
  }
  // Iterated angles; the first polar angle is measured from e_n.
  const int k = dimension - 1;
  std::vector<int> idx(k, 0);
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  for (std::size_t node = 0; node < total; ++node) {
    std::size_t rest = node;
    for (int d = k; d-- > 0;) {
      idx[d] = static_cast<int>(rest % static_cast<std::size_t>(counts[d]));
      rest /= static_cast<std::size_t>(counts[d]);
    }
    Vec dir(dimension);
    double prod = 1.0;
    for (int d = 0; d < k; ++d) {
      const double ang = d + 1 < k ? std::numbers::pi * (idx[d] + 0.5) / counts[d] : kTwoPi * idx[d] / counts[d];
      dir[dimension - 1 - d] = prod * std::cos(ang);
      prod *= std::sin(ang);
    }
    dir[0] = prod;
    dirs.push_back(dir);
  }
  return dirs;
}

WavefrontMesh blowup(const ForceField& F, const Vec& p0, double nu0, const MeshControls& controls,
                     const std::vector<double>& t_list) {
  if (nu0 == 0.0) throw DomainError("nu0 must be nonzero");
  const int n = static_cast<int>(p0.size());
  if (n != F.dimension) throw DomainError("point dimension differs from field dimension");
  const SphereLayout layout = sphere_layout(n, controls.counts);

  WavefrontMesh mesh;
  mesh.dimension = n;
  mesh.shape = layout.shape;
  mesh.periodic = layout.periodic;
  mesh.exclude_ends = layout.exclude_ends;
  mesh.pole_direction = layout.pole_direction;
  mesh.times = t_list;
  mesh.nu0 = nu0;
  mesh.description = "blowup";

  const std::vector<Vec> dirs = sphere_directions(n, controls.counts);
  std::vector<TrajectoryState> starts;
  starts.reserve(dirs.size());
  for (const Vec& d : dirs) starts.push_back({0.0, p0, nu0 * d});
  run_nodes(mesh, F, starts, controls.integrator);
  return mesh;
}

double SpeedFunction::operator()(const Vec& x) const {
  if (!expression) return constant;
  expr::Env env;
  env.x = x.data();
  env.n = static_cast<int>(x.size());
  return expr::eval(*expression, env);
}

WavefrontMesh shift(const ForceField& F, const Chart& surface, const SpeedFunction& nu,
                    const MeshControls& controls, const std::vector<double>& t_list) {
  const int n = static_cast<int>(surface.point.size());
  if (n != F.dimension) throw DomainError("chart dimension differs from field dimension");

  WavefrontMesh mesh;
  mesh.dimension = n;
  mesh.times = t_list;
  std::vector<TrajectoryState> starts;

  if (surface.kind == Chart::Kind::Sphere) {
    if (!(surface.radius > 0.0)) throw DomainError("sphere chart needs a positive radius");
    const SphereLayout layout = sphere_layout(n, controls.counts);
    mesh.shape = layout.shape;
    mesh.periodic = layout.periodic;
    mesh.exclude_ends = layout.exclude_ends;
    mesh.pole_direction = layout.pole_direction;
    mesh.description = "shift/sphere";
    for (const Vec& d : sphere_directions(n, controls.counts)) {
      const Vec x = surface.point + surface.radius * d;
      starts.push_back({0.0, x, nu(x) * d});
    }
  } else {
    if (surface.normal.size() != n || !(surface.normal.norm() > 0.0))
      throw DomainError("degenerate chart normal");
    if (controls.counts.size() != static_cast<std::size_t>(n - 1))
      throw DomainError("plane chart needs n - 1 counts");
    for (int c : controls.counts)
      if (c < 3) throw DomainError("mesh needs at least 3 nodes per parameter direction");
    const Vec normal = surface.normal.normalized();
    const std::vector<Vec> basis = tangent_basis(normal);
    mesh.shape = controls.counts;
    mesh.periodic.assign(n - 1, false);
    mesh.exclude_ends.assign(n - 1, false);
    mesh.description = "shift/plane";
    const std::size_t total = mesh.node_count();
    for (std::size_t node = 0; node < total; ++node) {
      const std::vector<int> idx = mesh.index_of(node);
      Vec x = surface.point;
      for (int a = 0; a < n - 1; ++a)
        x += (-surface.extent + 2.0 * surface.extent * idx[a] / (mesh.shape[a] - 1)) * basis[a];
      starts.push_back({0.0, x, nu(x) * normal});
    }
  }
  for (const auto& s : starts)
    if (s.v.norm() == 0.0) throw DomainError("speed function vanishes on the surface");
  mesh.nu0 = starts.empty() ? 0.0 : starts.front().v.norm();
  run_nodes(mesh, F, starts, controls.integrator);
  return mesh;
}

OrthogonalityReport orthogonality_report(const WavefrontMesh& mesh, std::size_t k) {
  if (k >= mesh.times.size()) throw DomainError("time index out of range");
  const int n = mesh.dimension;
  const std::size_t count = mesh.node_count();
  const auto& X = mesh.positions[k];
  const auto& V = mesh.velocities[k];

  OrthogonalityReport rep;
  rep.t = mesh.times[k];
  rep.per_node.assign(count, 0.0);

  std::vector<double> vel(static_cast<std::size_t>(n) * count), tan(vel.size()), dev(count);
  for (std::size_t i = 0; i < count; ++i)
    for (int c = 0; c < n; ++c) vel[c * count + i] = V[i][c];

  for (std::size_t d = 0; d < mesh.shape.size(); ++d) {
    const int m = mesh.shape[d];
    if (m < 3) throw DomainError("orthogonality needs at least 3 nodes per parameter direction");
    const bool pole = static_cast<int>(d) == mesh.pole_direction;
    for (std::size_t i = 0; i < count; ++i) {
      const std::vector<int> idx = mesh.index_of(i);
      const int r = idx[d];
      // position of the node offset by s along d
      auto at = [&](int s) -> const Vec& {
        std::vector<int> j = idx;
        int q = r + s;
        if (mesh.periodic[d]) {
          q = ((q % m) + m) % m;
        } else if (pole && (q < 0 || q >= m)) {
          // across the pole: same polar distance, opposite longitude
          q = q < 0 ? -q - 1 : 2 * m - q - 1;
          const int lon = static_cast<int>(mesh.shape.size()) - 1;
          j[lon] = (j[lon] + mesh.shape[lon] / 2) % mesh.shape[lon];
        }
        j[d] = q;
        return X[mesh.node_of(j)];
      };
      Vec t;
      const bool interior = mesh.periodic[d] || pole || (r >= 2 && r <= m - 3);
      if (interior && m >= 5) {
        t = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / 12.0;
      } else if (m >= 5) {
        if (r == 0) t = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / 12.0;
        else if (r == 1) t = (-3.0 * at(-1) - 10.0 * at(0) + 18.0 * at(1) - 6.0 * at(2) + at(3)) / 12.0;
        else if (r == m - 2) t = (3.0 * at(1) + 10.0 * at(0) - 18.0 * at(-1) + 6.0 * at(-2) - at(-3)) / 12.0;
        else t = (25.0 * at(0) - 48.0 * at(-1) + 36.0 * at(-2) - 16.0 * at(-3) + 3.0 * at(-4)) / 12.0;
      } else {
        if (interior || (r > 0 && r < m - 1)) t = 0.5 * (at(1) - at(-1));
        else if (r == 0) t = 0.5 * (-3.0 * at(0) + 4.0 * at(1) - at(2));
        else t = 0.5 * (3.0 * at(0) - 4.0 * at(-1) + at(-2));
      }
      for (int c = 0; c < n; ++c) tan[c * count + i] = t[c];
    }
    simd::angle_deviation(n, count, vel.data(), tan.data(), dev.data());
    for (std::size_t i = 0; i < count; ++i) {
      double& slot = rep.per_node[i];
      if (std::isnan(slot)) continue;
      if (std::isnan(dev[i])) slot = kNaN;
      else slot = std::max(slot, dev[i]);
    }
  }

  double total = 0.0;
  std::size_t used = 0;
  rep.max_dev = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double& s = rep.per_node[i];
    if (!mesh.node_ok[i]) s = kNaN;
    if (!std::isnan(s)) {
      const std::vector<int> idx = mesh.index_of(i);
      for (std::size_t d = 0; d < mesh.shape.size(); ++d)
        if (mesh.exclude_ends[d] && (idx[d] == 0 || idx[d] == mesh.shape[d] - 1)) s = kNaN;
    }
    if (std::isnan(s)) {
      ++rep.excluded;
      continue;
    }
    rep.max_dev = std::max(rep.max_dev, s);
    total += s;
    ++used;
  }
  if (used == 0) {
    rep.max_dev = kNaN;
    rep.mean_dev = kNaN;
  } else {
    rep.mean_dev = total / static_cast<double>(used);
  }
  return rep;
}

double speed_band_horizon(const ForceField& F, const std::vector<Vec>& initial_velocities, double lo,
                          double hi, double t_cap, double resolution) {
  if (!F.spatially_homogeneous) throw DomainError("speed horizon needs a spatially homogeneous field");
  if (!(resolution > 0.0) || !(t_cap > 0.0)) throw DomainError("horizon needs positive cap and resolution");
  const auto steps = static_cast<int>(std::ceil(t_cap / resolution));
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) grid[i] = std::min(t_cap, (i + 1) * resolution);

  std::vector<double> horizon(initial_velocities.size(), t_cap);
  parallel_for(initial_velocities.size(), [&](std::size_t i) {
    const Vec& v0 = initial_velocities[i];
    const double s0 = v0.norm();
    if (!(s0 > lo && s0 < hi)) {
      horizon[i] = 0.0;
      return;
    }
    const int n = static_cast<int>(v0.size());
    const Trajectory tr = integrate_trajectory(F, {0.0, Vec::Zero(n), v0}, grid);
    double last = 0.0;
    for (const auto& s : tr.samples) {
      const double sp = s.v.norm();
      if (!(sp > lo && sp < hi)) {
        horizon[i] = last;
        return;
      }
      last = s.t;
    }
    horizon[i] = tr.ok ? t_cap : last;
  });
  return horizon.empty() ? t_cap : *std::min_element(horizon.begin(), horizon.end());
}

// ---------------------------------------------------------------------------

namespace {

void put(std::ostream& os, double x) {
  if (std::isnan(x)) {
    os << "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

}  // namespace

void write_wavefront_csv(const WavefrontMesh& mesh, const std::vector<OrthogonalityReport>& reports,
                         const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path);
  const int n = mesh.dimension;
  os << "t";
  for (std::size_t d = 0; d < mesh.shape.size(); ++d) os << ",i" << d + 1;
  for (int c = 0; c < n; ++c) os << ",x" << c + 1;
  for (int c = 0; c < n; ++c) os << ",v" << c + 1;
  os << ",dev\n";
  for (std::size_t k = 0; k < mesh.times.size(); ++k) {
    const OrthogonalityReport* rep = nullptr;
    for (const auto& r : reports)
      if (r.t == mesh.times[k]) rep = &r;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      put(os, mesh.times[k]);
      for (int idx : mesh.index_of(i)) os << ',' << idx;
      for (int c = 0; c < n; ++c) os << ',', put(os, mesh.positions[k][i][c]);
      for (int c = 0; c < n; ++c) os << ',', put(os, mesh.velocities[k][i][c]);
      os << ',';
      put(os, rep ? rep->per_node[i] : std::numeric_limits<double>::quiet_NaN());
      os << '\n';
    }
  }
}

void write_wavefront_svg(const WavefrontMesh& mesh, const std::string& path) {
  const int n = mesh.dimension;
  const std::size_t count = mesh.node_count();
  // Section nodes: the meridian of longitudes 0 and half a turn on n = 3
  // spheres, all nodes otherwise.
  std::vector<std::size_t> section;
  const bool meridian = mesh.pole_direction == 0 && mesh.shape.size() == 2;
  if (meridian) {
    const int lat = mesh.shape[0], lon = mesh.shape[1];
    for (int i = 0; i < lat; ++i) section.push_back(mesh.node_of({i, 0}));
    for (int i = lat; i-- > 0;) section.push_back(mesh.node_of({i, lon / 2}));
  } else {
    for (std::size_t i = 0; i < count; ++i) section.push_back(i);
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t k = 0; k < mesh.times.size(); ++k)
    for (std::size_t i : section) {
      const Vec& p = mesh.positions[k][i];
      if (!p.allFinite()) continue;
      xmin = std::min(xmin, p[0]);
      xmax = std::max(xmax, p[0]);
      ymin = std::min(ymin, p[n - 1]);
      ymax = std::max(ymax, p[n - 1]);
    }
  if (xmin > xmax) xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double size = 640.0, pad = 20.0, scale = (size - 2 * pad) / span;
  auto sx = [&](double x) { return pad + (x - xmin) * scale; };
  auto sy = [&](double y) { return size - pad - (y - ymin) * scale; };

  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path);
  char buf[64];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
  os << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  // trajectory hairlines
  for (std::size_t i : section) {
    os << "<polyline fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\" points=\"";
    for (std::size_t k = 0; k < mesh.times.size(); ++k) {
      const Vec& p = mesh.positions[k][i];
      if (!p.allFinite()) continue;
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(p[0]), sy(p[n - 1]));
      os << buf;
    }
    os << "\"/>\n";
  }
  // wavefronts
  for (std::size_t k = 0; k < mesh.times.size(); ++k) {
    if (meridian) {
      os << "<polygon fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"1\" points=\"";
      for (std::size_t i : section) {
        const Vec& p = mesh.positions[k][i];
        if (!p.allFinite()) continue;
        std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(p[0]), sy(p[n - 1]));
        os << buf;
      }
      os << "\"/>\n";
    } else {
      for (std::size_t i : section) {
        const Vec& p = mesh.positions[k][i];
        if (!p.allFinite()) continue;
        std::snprintf(buf, sizeof buf, "%.3f", sx(p[0]));
        os << "<circle cx=\"" << buf;
        std::snprintf(buf, sizeof buf, "%.3f", sy(p[n - 1]));
        os << "\" cy=\"" << buf << "\" r=\"1\" fill=\"#1f4e99\"/>\n";
      }
    }
  }
  os << "</svg>\n";
}

}  // namespace nslab::dynamics
