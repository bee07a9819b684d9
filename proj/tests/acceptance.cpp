// Acceptance suite: one PASS/FAIL line per criterion with the measured numbers.
// Exit status is 0 when every criterion was evaluated (red ones included) and
// 2 when a criterion could not be evaluated because something threw.

#include "nslab/ansatz.hpp"
#include "nslab/axial.hpp"
#include "nslab/dynamics.hpp"
#include "nslab/experiment.hpp"
#include "nslab/normality.hpp"
#include "nslab/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace nslab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr axial::ProfileKind kKinds[] = {axial::ProfileKind::Log, axial::ProfileKind::Sqrt};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) detail += " [x]";
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

double max_of(const normality::ResidualReport& r) { return r.summary().max; }

double fraction_above(const normality::ResidualReport& r, double level) {
  std::size_t k = 0;
  for (const auto& s : r.samples) k += s.normalized > level;
  return static_cast<double>(k) / static_cast<double>(r.samples.size());
}

normality::FieldBundle axial_bundle(const axial::AxialFieldSpec& s) {
  normality::FieldBundle b;
  b.A = axial::lift_to_field(s);
  b.F = axial::force_field(s);
  b.polar = [s](double v, double th) { return axial::A_polar(s, v, th); };
  b.axis = s.axis_or_default();
  return b;
}

normality::FieldBundle mdtype_bundle(const ansatz::MdTypeSpec& md) {
  normality::FieldBundle b;
  b.A = ansatz::mdtype_field(md);
  b.F = ansatz::force_from_A(b.A);
  b.polar = [md](double v, double th) { return ansatz::mdtype_axial_A(md, v, th); };
  b.axis = md.axis_or_default();
  return b;
}

// ---------------------------------------------------------------------------

Outcome functional_equation() {
  Outcome o;
  double worst = 0.0, ends = 0.0, cross = 0.0;
  sampling::Rng rng(101);
  for (auto kind : kKinds) {
    const auto s = axial::canonical_spec(kind);
    for (int k = 0; k < 5000; ++k) {
      const double v = rng.uniform(s.v_min() * 1.001, 10.0 * s.v0);
      const double th = rng.uniform(0.0, kPi);
      const double z = axial::solve_z(s, v, th);
      worst = std::max(worst, std::abs(th - z - s.profile.f(std::cos(z) / v)));
      if (k % 50 == 0) {
        ends = std::max({ends, std::abs(axial::solve_z(s, v, 0.0) + kPi / 2), std::abs(axial::solve_z(s, v, kPi) - kPi / 2)});
        const double t0 = axial::theta0(s, v);
        cross = std::max({cross, std::abs(t0 - s.profile.f(1.0 / v)), std::abs(axial::solve_z(s, v, t0))});
      }
    }
  }
  o.require(worst <= 1e-12, "max |theta - z - f| = " + num(worst) + " over 10000");
  o.require(ends <= 1e-10, "endpoints " + num(ends));
  o.require(cross <= 1e-10, "theta0 cross-check " + num(cross));
  return o;
}

Outcome structure_constants() {
  Outcome o;
  double zt = 0.0, residue = 0.0, b_ends = 0.0, a_ends = 0.0, a_zero = 0.0;
  for (auto kind : kKinds) {
    const auto s = axial::canonical_spec(kind);
    for (double v : {3.3, 4.0, 6.0, 9.0, 20.0}) {
      const double t0 = axial::theta0(s, v);
      zt = std::max(zt, std::abs(axial::z_theta(s, v, 0.0) - 1.0));
      for (double e : {-1e-3, 1e-3}) residue = std::max(residue, std::abs(e * axial::b_eval(s, v, t0 + e) - 1.0));
      b_ends = std::max({b_ends, std::abs(axial::b_eval(s, v, 0.0)), std::abs(axial::b_eval(s, v, kPi))});
      a_ends = std::max({a_ends, std::abs(axial::A_polar_jet(s, v, 0.0).A_theta),
                         std::abs(axial::A_polar_jet(s, v, kPi).A_theta)});
      a_zero = std::max(a_zero, std::abs(axial::A_polar(s, v, t0)));
    }
  }
  o.require(zt <= 1e-6, "|z_theta(theta0) - 1| = " + num(zt));
  o.require(residue <= 1e-2, "pole residue error " + num(residue));
  o.require(b_ends <= 1e-10, "b at the axis " + num(b_ends));
  o.require(a_ends <= 1e-6, "A_theta at the axis " + num(a_ends));
  o.require(a_zero <= 1e-10, "A(theta0) " + num(a_zero));
  return o;
}

Outcome pde_residuals() {
  Outcome o;
  double wb = 0.0, wz = 0.0, wa = 0.0;
  for (auto kind : kKinds) {
    const auto s = axial::canonical_spec(kind);
    const auto A = [s](double v, double th) { return axial::A_polar(s, v, th); };
    for (int i = 0; i < 50; ++i) {
      const double v = s.knot() * 1.05 + 10.0 * i / 49;
      const double t0 = axial::theta0(s, v);
      for (int j = 0; j < 50; ++j) {
        const double th = 0.02 + (kPi - 0.04) * j / 49;
        if (std::abs(th - t0) <= 0.02) continue;
        wb = std::max(wb, normality::b_equation_closed(s, v, th).normalized);
        if (std::abs(axial::solve_z(s, v, th)) < kPi / 2 - 0.01)
          wz = std::max(wz, normality::z_equation_closed(s, v, th).normalized);
        if (i % 5 == 0 && j % 5 == 0) wa = std::max(wa, normality::polar(A, v, th).normalized);
      }
    }
  }
  const std::function<double(double)> cs[] = {[](double v) { return v * v; },
                                               [](double v) { return std::exp(-v) + 2.0; },
                                               [](double v) { return 1.0 + std::sin(v); }};
  double wc = 0.0;
  for (const auto& c : cs) {
    const auto A = [c](double v, double th) { return c(v) * std::cos(th); };
    for (double v : {0.7, 1.9, 4.2})
      for (double th : {0.2, 1.1, 2.0, 2.9}) wc = std::max(wc, normality::polar(A, v, th).normalized);
  }
  o.require(wb <= 1e-9, "b equation " + num(wb));
  o.require(wz <= 1e-9, "z equation " + num(wz));
  o.require(wa <= 1e-6, "polar equation " + num(wa));
  o.require(wc <= 1e-8, "C cos(theta) " + num(wc));
  return o;
}

Outcome characteristics() {
  Outcome o;
  double d1 = 0.0, d2 = 0.0, rel = 0.0;
  for (auto kind : kKinds) {
    const auto s = axial::canonical_spec(kind);
    for (double v : {4.0, 6.0, 10.0})
      for (double th : {0.3, 1.0, 2.0}) {
        const normality::CharacteristicState st{th, axial::solve_z(s, v, th), v, 0.0};
        const auto i0 = normality::first_integrals(st);
        for (const auto& q : normality::characteristic_flow(st, 1.0, 1e-3).states) {
          const auto i = normality::first_integrals(q);
          d1 = std::max(d1, std::abs(i.I1 - i0.I1));
          d2 = std::max(d2, std::abs(i.I2 - i0.I2));
          rel = std::max(rel, std::abs(i.I1 - s.profile.f(i.I2)));
        }
      }
  }
  o.require(d1 <= 1e-12, "I1 drift " + num(d1));
  o.require(d2 <= 1e-8, "I2 drift " + num(d2));
  o.require(rel <= 1e-8, "I1 - f(I2) " + num(rel));
  return o;
}

Outcome ansatz_identity() {
  Outcome o;
  const auto region = sampling::plain_region(3, unit(3, 2), 1.0, 5.0);
  double poly = 0.0;
  sampling::Rng rng(105);
  for (int k = 0; k < 10; ++k) {
    normality::FieldBundle b;
    b.A = sampling::polynomial_field(sampling::random_polynomial(rng, 3, 3), "poly");
    b.F = ansatz::force_from_A(b.A);
    poly = std::max(poly, max_of(normality::evaluate(normality::Equation::Weak1, b, sampling::phase_samples(region, 100, 200 + k))));
  }
  const auto s = axial::canonical_spec();
  normality::FieldBundle ax;
  ax.A = axial::lift_to_field(s);
  ax.F = ansatz::force_from_A(ax.A);
  const double field =
      max_of(normality::evaluate(normality::Equation::Weak1, ax, sampling::phase_samples(sampling::axial_region(s), 100, 210)));
  o.require(poly <= 1e-6, "10 polynomials x 100 points " + num(poly));
  o.require(field <= 1e-6, "axial field " + num(field));
  return o;
}

Outcome equivalence_chain() {
  using normality::Equation;
  Outcome o;
  const Equation chain[] = {Equation::Scalar, Equation::Homogeneous, Equation::Polar};

  const auto s = axial::canonical_spec();
  const auto good = axial_bundle(s);
  const auto gp = sampling::phase_samples(sampling::axial_region(s), 200, 106);
  double good_max = 0.0;
  for (auto eq : chain) good_max = std::max(good_max, max_of(normality::evaluate(eq, good, gp)));

  // A = (v^1)^2 is axially symmetric about e1: v^2 cos^2 theta
  normality::FieldBundle bad;
  bad.A.dimension = 3;
  bad.A.name = "(v1)^2";
  bad.A.spatially_homogeneous = true;
  bad.A.value = [](const PhasePoint& p) { return p.v[0] * p.v[0]; };
  bad.polar = [](double v, double th) { return v * v * std::cos(th) * std::cos(th); };
  bad.axis = unit(3, 0);
  const auto bp = sampling::phase_samples(sampling::plain_region(3, bad.axis, 1.0, 5.0), 200, 107);
  std::vector<normality::ResidualReport> reps;
  for (auto eq : chain) reps.push_back(normality::evaluate(eq, bad, bp));
  double worst_fraction = 1.0;
  bool agree = true;
  for (const auto& r : reps) {
    worst_fraction = std::min(worst_fraction, fraction_above(r, 1e-2));
    agree = agree && r.summary().verdict == normality::Verdict::Fail;
  }
  // per sample the three normalizations may straddle a threshold near a zero of the residual
  std::size_t split = 0;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const auto v0 = normality::classify(reps[0].samples[i].normalized);
    bool same = true;
    for (const auto& r : reps) same = same && normality::classify(r.samples[i].normalized) == v0;
    split += !same;
  }
  o.require(good_max <= 1e-4, "solution max " + num(good_max));
  o.require(worst_fraction >= 0.9, "non-solution > 1e-2 at " + num(100 * worst_fraction) + "%");
  o.require(agree, "report verdicts agree (" + std::to_string(split) + " samples split)");
  return o;
}

Outcome class_separation() {
  using normality::Equation;
  Outcome o;
  const auto t_start = std::chrono::steady_clock::now();
  const auto s = axial::canonical_spec();
  const auto b = axial_bundle(s);
  const auto pts = sampling::phase_samples(sampling::axial_region(s), 200, 1);
  const double weak = std::max(max_of(normality::evaluate(Equation::Weak1, b, pts)),
                               max_of(normality::evaluate(Equation::Weak2, b, pts)));
  const auto add = normality::evaluate(Equation::Additional, b, pts);
  const double above = fraction_above(add, 1e-2);
  o.require(weak <= 1e-4, "(a) weak max " + num(weak));
  o.require(above >= 0.9, "(a) additional > 1e-2 at " + num(100 * above) + "% (verdict " +
                              normality::verdict_name(add.summary().verdict) + ", median " + num(add.summary().p50) + ")");

  ansatz::MdTypeSpec h0;
  h0.h = 0;
  h0.C_text = "v^2";
  ansatz::MdTypeSpec h1;
  h1.h = 1;
  h1.H_text = "1";
  h1.kappa = 1.0;
  double family = 0.0;
  for (const auto& md : {h0, h1}) {
    const auto mb = mdtype_bundle(md);
    const auto mp = sampling::phase_samples(sampling::plain_region(3, mb.axis, 1.0, 5.0), 200, 108);
    for (auto eq : {Equation::Weak1, Equation::Weak2, Equation::Additional})
      family = std::max(family, max_of(normality::evaluate(eq, mb, mp)));
  }
  o.require(family <= 1e-4, "(b) comparison family max " + num(family));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  o.require(secs < 60.0, "runtime " + num(secs) + " s");
  return o;
}

Outcome cos_span() {
  Outcome o;
  const auto grid = ansatz::cos_fit_grid(64);
  for (auto kind : kKinds) {
    const auto s = axial::canonical_spec(kind);
    const auto fit = ansatz::cos_fit([s](double t) { return axial::A_polar(s, 2 * s.v0, t); }, grid);
    o.require(fit.relative_misfit > 0.05,
              std::string(axial::AxialProfile::kind_name(kind)) + " misfit " + num(fit.relative_misfit));
  }
  ansatz::MdTypeSpec h1;
  h1.h = 1;
  h1.H_text = "1 + v";
  ansatz::MdTypeSpec h0;
  h0.h = 0;
  double family = 0.0;
  for (const auto& md : {h0, h1})
    for (double v : {2.0, 6.0})
      family = std::max(family, ansatz::cos_fit([&](double t) { return ansatz::mdtype_axial_A(md, v, t); }, grid).relative_misfit);
  o.require(family <= 1e-10, "comparison family misfit " + num(family));
  return o;
}

Outcome blowup_orthogonality() {
  Outcome o;
  const auto t_start = std::chrono::steady_clock::now();
  const auto s = axial::canonical_spec();
  const auto F = axial::force_field(s);
  const double nu0 = 2 * s.v0, lo = s.v0 * (1 + s.cutoff_margin), hi = 5 * s.v0;

  // the force is axially symmetric, so one meridian of initial velocities
  // decides the horizon for the whole sphere
  const int lat = 64;
  std::vector<Vec> meridian;
  for (int i = 0; i < lat; ++i) {
    const double th = (i + 0.5) * kPi / lat;
    Vec d(3);
    d << std::sin(th), 0.0, std::cos(th);
    meridian.push_back(nu0 * d);
  }
  const double T = dynamics::speed_band_horizon(F, meridian, lo, hi, 10.0, 1e-2);
  std::vector<double> times;
  for (int k = 0; k <= 6; ++k) times.push_back(T * k / 6);

  auto max_devs = [&](int n_lat) {
    dynamics::MeshControls mc;
    mc.counts = {n_lat, 2 * n_lat};
    const auto m = dynamics::blowup(F, Vec::Zero(3), nu0, mc, times);
    std::vector<double> out;
    double s_lo = 1e300, s_hi = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
      out.push_back(dynamics::orthogonality_report(m, k).max_dev);
      for (const auto& v : m.velocities[k]) {
        s_lo = std::min(s_lo, v.norm());
        s_hi = std::max(s_hi, v.norm());
      }
    }
    return std::make_pair(out, s_lo > lo && s_hi < hi);
  };
  const auto [base, in_band] = max_devs(lat);
  const auto fine = max_devs(2 * lat).first;
  const double worst = *std::max_element(base.begin(), base.end());
  double change = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) change = std::max(change, std::abs(fine[k] - base[k]) / base[k]);
  o.require(in_band, "speeds stay in the band up to T = " + num(T));
  o.require(worst <= 1e-4, "64x128 max_dev " + num(worst) + " (at T " + num(base.back()) + ")");
  o.require(change < 0.1, "mesh doubling changes max_dev by " + num(100 * change) + "% (128x256 at T " + num(fine.back()) + ")");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  o.require(secs < 120.0, "runtime " + num(secs) + " s");
  return o;
}

Outcome gauge_invariance() {
  Outcome o;
  const auto base = ansatz::make_w_spec(1, "ln(v) + 0.3*x1", 3);
  sampling::Rng rng(110);
  const auto pts = sampling::phase_samples(sampling::plain_region(3, unit(3, 2), 1.0, 5.0), 10, 111);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double a = rng.uniform(0.2, 3.0), b = rng.uniform(0.0, 1.0), c = rng.uniform(-1.0, 1.0);
    const auto g = ansatz::gauge_apply(base, std::to_string(a) + "*w + " + std::to_string(b) + "*atan(w) + " +
                                                 std::to_string(c) + " + 0.05*w^3");
    for (const auto& p : pts) {
      const double want = ansatz::A_from_W(base, p);
      worst = std::max(worst, std::abs(ansatz::A_from_W(g, p) - want) / (1 + std::abs(want)));
    }
  }
  o.require(worst <= 1e-8, "20 gauges x 10 points " + num(worst));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / "nslab_acceptance";
  fs::remove_all(root);
  const std::string axial_field = R"("field": {"axial": {"profile": {"kind": "log", "alpha": 1.0, "beta": 1.0}}})";
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"res", "{" + axial_field + R"(, "task": {"residuals": {"equation": "weak2", "samples": 60, "seed": 4}}})"},
      {"add", R"({"field": {"mdtype": {"h": 1, "H": "1", "kappa": 1.0}}, "task": {"residuals": {"equation": "additional", "samples": 40}}})"},
      {"blow", "{" + axial_field + R"(, "task": {"blowup": {"nu0": 6, "times": [0, 0.5, 1], "mesh": [16, 32]}}})"},
      {"shift", "{" + axial_field +
                    R"(, "task": {"shift": {"chart": {"kind": "plane", "point": [0, 0, 0], "normal": [0, 0, 1]}, "nu": "6", "times": [0, 0.3], "mesh": [9, 9]}}})"},
      {"char", "{" + axial_field + R"(, "task": {"characteristics": {"theta": 1.0, "v": 6}}})"},
      {"fit", "{" + axial_field + R"(, "task": {"cosfit": {}}})"},
  };
  std::size_t files = 0, differ = 0, invalid = 0;
  std::ostringstream log;
  for (const auto& [name, text] : jobs) {
    std::vector<std::string> first;
    for (const char* pass : {"a", "b"}) {
      fs::create_directories(root / pass);
      auto doc = io::Json::parse(text);
      doc["output"] = (root / pass / name).string();
      const auto r = experiment::run(experiment::config_from_json(doc), log);
      for (std::size_t i = 0; i < r.artifacts.size(); ++i) {
        if (std::string(pass) == "a") {
          first.push_back(slurp(r.artifacts[i]));
          ++files;
          try {
            experiment::validate_artifact(r.artifacts[i]);
          } catch (const std::exception& e) {
            ++invalid;
            std::fprintf(stderr, "%s: %s\n", r.artifacts[i].c_str(), e.what());
          }
        } else if (i >= first.size() || slurp(r.artifacts[i]) != first[i]) {
          ++differ;
        }
      }
    }
  }
  fs::remove_all(root);
  o.require(differ == 0, std::to_string(files) + " artifacts, " + std::to_string(differ) + " differ on rerun");
  o.require(invalid == 0, std::to_string(invalid) + " fail validation");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"functional equation solve", functional_equation},
      {"structure constants", structure_constants},
      {"closed-form PDE residuals", pde_residuals},
      {"characteristics", characteristics},
      {"ansatz identity", ansatz_identity},
      {"equivalence chain", equivalence_chain},
      {"class separation", class_separation},
      {"cos(theta) span separation", cos_span},
      {"blow-up orthogonality", blowup_orthogonality},
      {"gauge invariance", gauge_invariance},
      {"determinism and formats", determinism},
  };
  int status = 0, passed = 0, id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
      status = 2;
    }
    passed += o.pass;
    std::printf("%-4s %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass\n", passed, id);
  return status;
}
