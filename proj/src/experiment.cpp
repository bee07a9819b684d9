#include "nslab/experiment.hpp"

#include "nslab/expr.hpp"
#include "nslab/normality.hpp"
#include "nslab/sampling.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nslab::experiment {

using io::Json;
using namespace io::schema;

namespace {

// {"<tag>": {...}} with exactly one key.
std::pair<std::string, const Json*> single_tag(const Json& j, const std::string& at) {
  require_object(j, at);
  if (j.size() != 1) throw SchemaError(at, "expected exactly one tagged member");
  return {j.begin().key(), &j.begin().value()};
}

std::vector<double> get_doubles(const Json& j, const std::string& at) {
  const Vec v = get_vec(j, at);
  return {v.data(), v.data() + v.size()};
}

std::vector<int> get_ints(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw SchemaError(at, "expected a non-empty array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], at + "/" + std::to_string(i)));
  return out;
}

Json doubles_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

void positive(double x, const std::string& at) {
  if (!(x > 0.0)) throw SchemaError(at, "must be positive");
}

WavefrontOptions wave_from_json(const Json& j, const std::string& at) {
  WavefrontOptions w;
  w.times = get_doubles(required(j, at, "times"), at + "/times");
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    if (w.times[i] < 0.0 || (i > 0 && w.times[i] < w.times[i - 1]))
      throw SchemaError(at + "/times/" + std::to_string(i), "times must be ascending and non-negative");
  }
  if (j.contains("mesh")) w.mesh = get_ints(j["mesh"], at + "/mesh");
  if (j.contains("tolerance")) w.tolerance = get_number(j["tolerance"], at + "/tolerance");
  if (j.contains("rtol")) w.rtol = get_number(j["rtol"], at + "/rtol");
  if (j.contains("atol")) w.atol = get_number(j["atol"], at + "/atol");
  positive(w.tolerance, at + "/tolerance");
  positive(w.rtol, at + "/rtol");
  positive(w.atol, at + "/atol");
  return w;
}

void wave_to_json(const WavefrontOptions& w, Json& j) {
  j["times"] = doubles_json(w.times);
  if (!w.mesh.empty()) j["mesh"] = w.mesh;
  j["tolerance"] = w.tolerance;
  j["rtol"] = w.rtol;
  j["atol"] = w.atol;
}

Task task_from_json(const Json& tagged, const std::string& at0) {
  const auto [tag, body] = single_tag(tagged, at0);
  const std::string at = at0 + "/" + tag;
  const Json& j = *body;
  require_object(j, at);
  if (tag == "residuals") {
    reject_unknown(j, at, {"equation", "samples", "seed", "v_range"});
    ResidualsTask t;
    if (j.contains("equation")) t.equation = get_string(j["equation"], at + "/equation");
    try {
      normality::parse_equation(t.equation);
    } catch (const DomainError& e) {
      throw SchemaError(at + "/equation", e.what());
    }
    if (j.contains("samples")) t.samples = get_int(j["samples"], at + "/samples");
    if (t.samples < 0) throw SchemaError(at + "/samples", "must be non-negative");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw SchemaError(at + "/seed", "expected a non-negative integer");
      t.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("v_range")) {
      const std::vector<double> r = get_doubles(j["v_range"], at + "/v_range");
      if (r.size() != 2 || !(r[0] > 0.0) || !(r[1] > r[0]))
        throw SchemaError(at + "/v_range", "expected [lo, hi] with 0 < lo < hi");
      t.v_range = {r[0], r[1]};
    }
    return t;
  }
  if (tag == "blowup") {
    reject_unknown(j, at, {"nu0", "point", "times", "mesh", "tolerance", "rtol", "atol"});
    BlowupTask t;
    t.nu0 = get_number(required(j, at, "nu0"), at + "/nu0");
    if (t.nu0 == 0.0) throw SchemaError(at + "/nu0", "nu0 must be nonzero");
    if (j.contains("point")) t.point = get_vec(j["point"], at + "/point");
    t.wave = wave_from_json(j, at);
    return t;
  }
  if (tag == "shift") {
    reject_unknown(j, at, {"chart", "nu", "times", "mesh", "tolerance", "rtol", "atol"});
    ShiftTask t;
    const Json& c = required(j, at, "chart");
    const std::string cat = at + "/chart";
    require_object(c, cat);
    reject_unknown(c, cat, {"kind", "point", "normal", "radius", "extent"});
    const std::string kind = get_string(required(c, cat, "kind"), cat + "/kind");
    if (kind == "plane") t.chart.kind = dynamics::Chart::Kind::Plane;
    else if (kind == "sphere") t.chart.kind = dynamics::Chart::Kind::Sphere;
    else throw SchemaError(cat + "/kind", "chart kind must be plane or sphere");
    t.chart.point = get_vec(required(c, cat, "point"), cat + "/point");
    if (t.chart.kind == dynamics::Chart::Kind::Plane) {
      t.chart.normal = get_vec(required(c, cat, "normal"), cat + "/normal");
      if (t.chart.normal.size() != t.chart.point.size())
        throw SchemaError(cat + "/normal", "normal length differs from point");
    } else if (c.contains("normal")) {
      throw SchemaError(cat + "/normal", "a sphere chart takes no normal");
    }
    if (c.contains("radius")) t.chart.radius = get_number(c["radius"], cat + "/radius");
    if (c.contains("extent")) t.chart.extent = get_number(c["extent"], cat + "/extent");
    positive(t.chart.radius, cat + "/radius");
    positive(t.chart.extent, cat + "/extent");
    if (j.contains("nu")) {
      if (j["nu"].is_number()) t.nu = io::format_double(get_number(j["nu"], at + "/nu"));
      else t.nu = get_string(j["nu"], at + "/nu");
    }
    try {
      expr::parse(t.nu);
    } catch (const SchemaError& e) {
      throw SchemaError(at + "/nu", e.what());
    }
    t.wave = wave_from_json(j, at);
    return t;
  }
  if (tag == "characteristics") {
    reject_unknown(j, at, {"theta", "v", "t_end", "step"});
    CharacteristicsTask t;
    if (j.contains("theta")) t.theta = get_number(j["theta"], at + "/theta");
    if (j.contains("v")) t.v = get_number(j["v"], at + "/v");
    if (j.contains("t_end")) t.t_end = get_number(j["t_end"], at + "/t_end");
    if (j.contains("step")) t.step = get_number(j["step"], at + "/step");
    positive(t.v, at + "/v");
    positive(t.t_end, at + "/t_end");
    positive(t.step, at + "/step");
    return t;
  }
  if (tag == "cosfit") {
    reject_unknown(j, at, {"v", "count"});
    CosfitTask t;
    if (j.contains("v")) {
      t.v = get_number(j["v"], at + "/v");
      positive(*t.v, at + "/v");
    }
    if (j.contains("count")) t.count = get_int(j["count"], at + "/count");
    if (t.count < 32) throw SchemaError(at + "/count", "cos fit needs at least 32 theta samples");
    return t;
  }
  throw SchemaError(at, "unknown task");
}

Json task_to_json(const Task& task) {
  Json body;
  if (const auto* t = std::get_if<ResidualsTask>(&task)) {
    body["equation"] = t->equation;
    body["samples"] = t->samples;
    body["seed"] = t->seed;
    if (t->v_range) body["v_range"] = {t->v_range->first, t->v_range->second};
  } else if (const auto* t = std::get_if<BlowupTask>(&task)) {
    body["nu0"] = t->nu0;
    if (t->point.size() > 0) body["point"] = vec_json(t->point);
    wave_to_json(t->wave, body);
  } else if (const auto* t = std::get_if<ShiftTask>(&task)) {
    Json c;
    c["kind"] = t->chart.kind == dynamics::Chart::Kind::Plane ? "plane" : "sphere";
    c["point"] = vec_json(t->chart.point);
    if (t->chart.kind == dynamics::Chart::Kind::Plane) {
      c["normal"] = vec_json(t->chart.normal);
      c["extent"] = t->chart.extent;
    } else {
      c["radius"] = t->chart.radius;
    }
    body["chart"] = c;
    body["nu"] = t->nu;
    wave_to_json(t->wave, body);
  } else if (const auto* t = std::get_if<CharacteristicsTask>(&task)) {
    body["theta"] = t->theta;
    body["v"] = t->v;
    body["t_end"] = t->t_end;
    body["step"] = t->step;
  } else {
    const auto& c = std::get<CosfitTask>(task);
    if (c.v) body["v"] = *c.v;
    body["count"] = c.count;
  }
  Json j;
  j[task_kind(task)] = body;
  return j;
}

std::string field_label(const io::FieldSpec& f) {
  if (const auto* a = std::get_if<axial::AxialFieldSpec>(&f))
    return std::string("axial/") + axial::AxialProfile::kind_name(a->profile.kind());
  if (const auto* m = std::get_if<ansatz::MdTypeSpec>(&f)) return "mdtype/h=" + std::to_string(m->h);
  return "wfunction/h=" + std::to_string(std::get<ansatz::WFunctionSpec>(f).h);
}

Json nan_as_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// ---------------------------------------------------------------------------

RunResult run_residuals(const ExperimentConfig& c, const ResidualsTask& t, std::ostream& log) {
  const normality::Equation eq = normality::parse_equation(t.equation);
  const normality::FieldBundle bundle = io::make_bundle(c.field);
  sampling::PhaseRegion region;
  if (const auto* a = std::get_if<axial::AxialFieldSpec>(&c.field)) {
    region = sampling::axial_region(*a);
  } else {
    region = sampling::plain_region(io::field_dimension(c.field), bundle.axis, 1.0, 5.0);
  }
  if (t.v_range) {
    region.v_lo = t.v_range->first;
    region.v_hi = t.v_range->second;
  }
  const auto points = sampling::phase_samples(region, static_cast<std::size_t>(t.samples), t.seed);
  std::ostringstream grid;
  grid << "random n=" << t.samples << " seed=" << t.seed << " v=(" << io::format_double(region.v_lo) << ","
       << io::format_double(region.v_hi) << ")";
  const normality::ResidualReport rep = normality::evaluate(eq, bundle, points, grid.str());
  const normality::Summary s = rep.summary();  // throws "no samples"

  Json summary;
  summary["task"] = "residuals";
  summary["field"] = field_label(c.field);
  const Json body = io::summary_json(rep);
  for (const auto& [k, v] : body.items()) summary[k] = v;

  RunResult r;
  const std::string csv = c.output + ".residuals.csv", js = c.output + ".summary.json";
  io::write_text_file(csv, io::residual_csv(rep));
  io::write_text_file(js, io::dump(summary));
  r.artifacts = {csv, js};
  r.verdict = normality::verdict_name(s.verdict);
  r.exit_code = s.verdict == normality::Verdict::Pass ? 0 : 1;
  char line[256];
  std::snprintf(line, sizeof line, "residuals %s %s: n=%zu max=%.3e mean=%.3e verdict=%s\n", t.equation.c_str(),
                field_label(c.field).c_str(), s.count, s.max, s.mean, r.verdict.c_str());
  log << line;
  return r;
}

std::vector<int> default_mesh(int n) {
  if (n == 2) return {128};
  if (n == 3) return {64, 128};
  return std::vector<int>(n - 1, 16);
}

RunResult finish_wavefront(const ExperimentConfig& c, const std::string& task, const dynamics::WavefrontMesh& mesh,
                           const WavefrontOptions& w, std::ostream& log) {
  std::vector<dynamics::OrthogonalityReport> reps;
  for (std::size_t k = 0; k < mesh.times.size(); ++k) reps.push_back(dynamics::orthogonality_report(mesh, k));

  std::size_t failed = 0;
  for (bool ok : mesh.node_ok) failed += ok ? 0 : 1;
  bool pass = failed == 0;
  bool any = false;
  double worst = 0.0;
  Json max_dev = Json::array(), mean_dev = Json::array(), excluded = Json::array();
  for (const auto& rp : reps) {
    max_dev.push_back(nan_as_null(rp.max_dev));
    mean_dev.push_back(nan_as_null(rp.mean_dev));
    excluded.push_back(rp.excluded);
    if (std::isfinite(rp.max_dev)) {
      any = true;
      worst = std::max(worst, rp.max_dev);
      if (rp.max_dev > w.tolerance) pass = false;
    }
  }
  pass = pass && any;

  Json s;
  s["task"] = task;
  s["field"] = field_label(c.field);
  s["dimension"] = mesh.dimension;
  s["mesh"] = mesh.shape;
  s["nodes"] = mesh.node_count();
  s["failed_nodes"] = failed;
  s["nu0"] = mesh.nu0;
  s["tolerance"] = w.tolerance;
  s["times"] = doubles_json(mesh.times);
  s["max_dev"] = max_dev;
  s["mean_dev"] = mean_dev;
  s["excluded"] = excluded;
  s["verdict"] = pass ? "PASS" : "FAIL";

  RunResult r;
  const std::string csv = c.output + ".wavefront.csv", svg = c.output + ".wavefront.svg",
                    js = c.output + ".summary.json";
  dynamics::write_wavefront_csv(mesh, reps, csv);
  dynamics::write_wavefront_svg(mesh, svg);
  io::write_text_file(js, io::dump(s));
  r.artifacts = {csv, svg, js};
  r.verdict = pass ? "PASS" : "FAIL";
  r.exit_code = pass ? 0 : 1;
  char line[256];
  std::snprintf(line, sizeof line, "%s %s: nodes=%zu failed=%zu max_dev=%.3e verdict=%s\n", task.c_str(),
                field_label(c.field).c_str(), mesh.node_count(), failed, worst, r.verdict.c_str());
  log << line;
  for (std::size_t i = 0; i < mesh.node_ok.size(); ++i) {
    if (!mesh.node_ok[i]) {
      log << "  first failed node " << i << ": " << mesh.node_diagnostic[i] << "\n";
      break;
    }
  }
  return r;
}

dynamics::MeshControls mesh_controls(const WavefrontOptions& w, int n) {
  dynamics::MeshControls mc;
  mc.counts = w.mesh.empty() ? default_mesh(n) : w.mesh;
  mc.integrator.rtol = w.rtol;
  mc.integrator.atol = w.atol;
  return mc;
}

ForceField force_of(const io::FieldSpec& f) { return io::make_bundle(f).F; }

RunResult run_blowup(const ExperimentConfig& c, const BlowupTask& t, std::ostream& log) {
  const int n = io::field_dimension(c.field);
  if (t.wave.times.empty()) throw SchemaError("/task/blowup/times", "at least one output time required");
  Vec p0 = t.point.size() > 0 ? t.point : Vec::Zero(n);
  if (p0.size() != n) throw SchemaError("/task/blowup/point", "point length differs from dimension");
  const auto mesh = dynamics::blowup(force_of(c.field), p0, t.nu0, mesh_controls(t.wave, n), t.wave.times);
  return finish_wavefront(c, "blowup", mesh, t.wave, log);
}

RunResult run_shift(const ExperimentConfig& c, const ShiftTask& t, std::ostream& log) {
  const int n = io::field_dimension(c.field);
  if (t.wave.times.empty()) throw SchemaError("/task/shift/times", "at least one output time required");
  if (t.chart.point.size() != n) throw SchemaError("/task/shift/chart/point", "point length differs from dimension");
  dynamics::SpeedFunction nu;
  const expr::Expr e = expr::parse(t.nu);
  if (e.max_position_index() > n) throw SchemaError("/task/shift/nu", "speed uses a coordinate beyond the dimension");
  if (e.is_constant()) nu.constant = e.constant_value();
  else nu.expression = e;
  const auto mesh = dynamics::shift(force_of(c.field), t.chart, nu, mesh_controls(t.wave, n), t.wave.times);
  return finish_wavefront(c, "shift", mesh, t.wave, log);
}

RunResult run_characteristics(const ExperimentConfig& c, const CharacteristicsTask& t, std::ostream& log) {
  const auto* spec = std::get_if<axial::AxialFieldSpec>(&c.field);
  if (!spec) throw DomainError("characteristics need an axial field");
  normality::CharacteristicState s0;
  s0.theta = t.theta;
  s0.v = t.v;
  s0.z = axial::solve_z(*spec, t.v, t.theta);
  const auto flow = normality::characteristic_flow(s0, t.t_end, t.step);
  const auto I0 = normality::first_integrals(s0);

  std::ostringstream csv;
  csv << "t,theta,z,v,I1,I2,relation\n";
  double d1 = 0.0, d2 = 0.0, rel = 0.0;
  for (const auto& s : flow.states) {
    const auto I = normality::first_integrals(s);
    const double r = I.I1 - spec->profile.f(I.I2);
    d1 = std::max(d1, std::abs(I.I1 - I0.I1));
    d2 = std::max(d2, std::abs(I.I2 - I0.I2));
    rel = std::max(rel, std::abs(r));
    csv << io::format_double(s.t) << ',' << io::format_double(s.theta) << ',' << io::format_double(s.z) << ','
        << io::format_double(s.v) << ',' << io::format_double(I.I1) << ',' << io::format_double(I.I2) << ','
        << io::format_double(r) << '\n';
  }
  const bool pass = d1 <= 1e-12 && d2 <= 1e-8 && rel <= 1e-8;

  Json js;
  js["task"] = "characteristics";
  js["field"] = field_label(c.field);
  js["theta0"] = t.theta;
  js["v0"] = t.v;
  js["z0"] = s0.z;
  js["t_end"] = t.t_end;
  js["step"] = t.step;
  js["states"] = flow.states.size();
  js["halted"] = flow.halted;
  js["I1_drift"] = d1;
  js["I2_drift"] = d2;
  js["relation_max"] = rel;
  js["verdict"] = pass ? "PASS" : "FAIL";

  RunResult r;
  const std::string cp = c.output + ".characteristics.csv", jp = c.output + ".summary.json";
  io::write_text_file(cp, csv.str());
  io::write_text_file(jp, io::dump(js));
  r.artifacts = {cp, jp};
  r.verdict = pass ? "PASS" : "FAIL";
  r.exit_code = pass ? 0 : 1;
  char line[256];
  std::snprintf(line, sizeof line, "characteristics: I1 drift=%.2e I2 drift=%.2e relation=%.2e%s verdict=%s\n", d1,
                d2, rel, flow.halted ? " (halted)" : "", r.verdict.c_str());
  log << line;
  return r;
}

RunResult run_cosfit(const ExperimentConfig& c, const CosfitTask& t, std::ostream& log) {
  const normality::FieldBundle b = io::make_bundle(c.field);
  if (!b.polar) throw DomainError("cos fit needs an axially symmetric field");
  double v = 2.0;
  if (const auto* a = std::get_if<axial::AxialFieldSpec>(&c.field)) v = 2.0 * a->v0;
  if (t.v) v = *t.v;
  const auto& A = *b.polar;
  const ansatz::CosFit fit = ansatz::cos_fit([&](double th) { return A(v, th); }, ansatz::cos_fit_grid(t.count));

  Json js;
  js["task"] = "cosfit";
  js["field"] = field_label(c.field);
  js["v"] = v;
  js["count"] = t.count;
  js["H_hat"] = fit.H_hat;
  js["C_hat"] = fit.C_hat;
  js["relative_misfit"] = fit.relative_misfit;

  RunResult r;
  const std::string jp = c.output + ".summary.json";
  io::write_text_file(jp, io::dump(js));
  r.artifacts = {jp};
  char line[256];
  std::snprintf(line, sizeof line, "cosfit %s v=%g: H=%.6g C=%.6g misfit=%.4e\n", field_label(c.field).c_str(), v,
                fit.H_hat, fit.C_hat, fit.relative_misfit);
  log << line;
  return r;
}

}  // namespace

const char* task_kind(const Task& t) {
  switch (t.index()) {
    case 0: return "residuals";
    case 1: return "blowup";
    case 2: return "shift";
    case 3: return "characteristics";
    default: return "cosfit";
  }
}

ExperimentConfig config_from_json(const Json& j) {
  require_object(j, "");
  reject_unknown(j, "", {"field", "task", "output"});
  ExperimentConfig c;
  const auto [kind, body] = single_tag(required(j, "", "field"), "/field");
  const std::string fat = "/field/" + kind;
  if (kind == "axial") c.field = io::axial_from_json(*body, fat);
  else if (kind == "mdtype") c.field = io::mdtype_from_json(*body, fat);
  else if (kind == "wfunction") c.field = io::wfunction_from_json(*body, fat);
  else throw SchemaError(fat, "unknown field kind");
  c.task = task_from_json(required(j, "", "task"), "/task");
  if (j.contains("output")) c.output = get_string(j["output"], "/output");
  if (c.output.empty()) throw SchemaError("/output", "output prefix must not be empty");
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  Json f;
  f[io::field_kind(c.field)] = io::to_json(c.field);
  j["field"] = f;
  j["task"] = task_to_json(c.task);
  j["output"] = c.output;
  return j;
}

RunResult run(const ExperimentConfig& config, std::ostream& log) {
  return std::visit(
      [&](const auto& t) -> RunResult {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ResidualsTask>) return run_residuals(config, t, log);
        else if constexpr (std::is_same_v<T, BlowupTask>) return run_blowup(config, t, log);
        else if constexpr (std::is_same_v<T, ShiftTask>) return run_shift(config, t, log);
        else if constexpr (std::is_same_v<T, CharacteristicsTask>) return run_characteristics(config, t, log);
        else return run_cosfit(config, t, log);
      },
      config.task);
}

// ---------------------------------------------------------------------------

namespace {

std::string cell(double x) {
  if (!std::isfinite(x)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string basename(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

std::string report(const std::vector<std::string>& summary_paths) {
  if (summary_paths.empty()) throw DomainError("no samples");
  struct Row {
    std::string artifact, task, subject, count, max, mean, verdict;
  };
  std::vector<Row> rows;
  bool weak_pass = false, additional_fail = false;
  for (const auto& path : summary_paths) {
    const Json j = io::read_json_file(path);
    require_object(j, "");
    Row row;
    row.artifact = basename(path);
    const std::string task = j.contains("task") ? get_string(j["task"], "/task") : "residuals";
    row.task = task;
    row.subject = j.contains("field") ? get_string(j["field"], "/field") : "";
    if (task == "residuals") {
      io::validate_summary(j);
      row.subject += " " + j["equation_id"].get<std::string>();
      row.count = std::to_string(j["count"].get<long>());
      row.max = cell(j["max"].get<double>());
      row.mean = cell(j["mean"].get<double>());
      row.verdict = j["verdict"].get<std::string>();
      const std::string eq = j["equation_id"].get<std::string>();
      if ((eq == "weak1" || eq == "weak2") && row.verdict == "PASS") weak_pass = true;
      if (eq == "additional" && row.verdict == "FAIL") additional_fail = true;
    } else if (task == "blowup" || task == "shift") {
      const long nodes = get_int(required(j, "", "nodes"), "/nodes");
      if (nodes <= 0) throw DomainError("no samples");
      row.count = std::to_string(nodes);
      double mx = -1.0, mean = 0.0;
      int k = 0;
      for (std::size_t i = 0; i < j["max_dev"].size(); ++i) {
        if (j["max_dev"][i].is_null()) continue;
        mx = std::max(mx, j["max_dev"][i].get<double>());
        mean += j["mean_dev"][i].get<double>();
        ++k;
      }
      row.max = k ? cell(mx) : "-";
      row.mean = k ? cell(mean / k) : "-";
      row.verdict = get_string(required(j, "", "verdict"), "/verdict");
    } else if (task == "characteristics") {
      const long states = get_int(required(j, "", "states"), "/states");
      if (states <= 0) throw DomainError("no samples");
      row.count = std::to_string(states);
      row.max = cell(std::max(get_number(j["I1_drift"], "/I1_drift"), get_number(j["I2_drift"], "/I2_drift")));
      row.mean = "-";
      row.verdict = get_string(required(j, "", "verdict"), "/verdict");
    } else if (task == "cosfit") {
      row.count = std::to_string(get_int(required(j, "", "count"), "/count"));
      row.max = cell(get_number(required(j, "", "relative_misfit"), "/relative_misfit"));
      row.mean = "-";
      row.verdict = "-";
    } else {
      throw SchemaError("/task", "unknown task in " + path);
    }
    rows.push_back(row);
  }

  const std::vector<std::string> head = {"artifact", "task", "subject", "count", "max", "mean", "verdict"};
  std::vector<std::size_t> width(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) width[i] = head[i].size();
  auto cols = [](const Row& r) {
    return std::vector<std::string>{r.artifact, r.task, r.subject, r.count, r.max, r.mean, r.verdict};
  };
  for (const auto& r : rows) {
    const auto c = cols(r);
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      os << c[i];
      if (i + 1 < c.size()) os << std::string(width[i] - c[i].size() + 2, ' ');
    }
    os << '\n';
  };
  line(head);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : rows) line(cols(r));
  if (weak_pass && additional_fail)
    os << "\n== class separation: weak normality PASS, additional normality FAIL ==\n";
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_number(const std::string& s) {
  if (s == "nan" || s == "inf" || s == "-inf") return true;
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Header must match `expected`; every row has the same width and numeric
// cells except in the columns listed in `text_cols`.
void check_csv(const std::string& path, const std::vector<std::string>& expected, std::size_t text_cols) {
  std::ifstream is(path);
  if (!is) throw SchemaError("", "cannot open " + path);
  std::string header;
  if (!std::getline(is, header)) throw SchemaError("", path + ": empty file");
  if (split_csv_line(header) != expected) throw SchemaError("", path + ": unexpected header '" + header + "'");
  std::string row;
  std::size_t line = 1, rows = 0;
  while (std::getline(is, row)) {
    ++line;
    const auto cells = split_csv_line(row);
    if (cells.size() != expected.size())
      throw SchemaError("", path + ":" + std::to_string(line) + ": wrong number of columns");
    for (std::size_t i = text_cols; i < cells.size(); ++i)
      if (!is_number(cells[i]))
        throw SchemaError("", path + ":" + std::to_string(line) + ": non-numeric cell '" + cells[i] + "'");
    ++rows;
  }
  if (rows == 0) throw SchemaError("", path + ": no samples");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int count_prefixed(const std::vector<std::string>& header, char prefix) {
  int k = 0;
  for (const auto& h : header)
    if (h.size() > 1 && h[0] == prefix && std::isdigit(static_cast<unsigned char>(h[1]))) ++k;
  return k;
}

std::vector<std::string> read_header(const std::string& path) {
  std::ifstream is(path);
  std::string header;
  if (!is || !std::getline(is, header)) throw SchemaError("", path + ": empty file");
  return split_csv_line(header);
}

void validate_wavefront_summary(const Json& j) {
  reject_unknown(j, "",
                 {"task", "field", "dimension", "mesh", "nodes", "failed_nodes", "nu0", "tolerance", "times",
                  "max_dev", "mean_dev", "excluded", "verdict"});
  get_string(required(j, "", "field"), "/field");
  get_dimension(required(j, "", "dimension"), "/dimension", 2);
  get_ints(required(j, "", "mesh"), "/mesh");
  if (get_int(required(j, "", "nodes"), "/nodes") <= 0) throw SchemaError("/nodes", "no samples");
  get_int(required(j, "", "failed_nodes"), "/failed_nodes");
  get_number(required(j, "", "nu0"), "/nu0");
  get_number(required(j, "", "tolerance"), "/tolerance");
  const std::size_t nt = get_vec(required(j, "", "times"), "/times").size();
  for (const char* key : {"max_dev", "mean_dev", "excluded"}) {
    const Json& a = required(j, "", key);
    if (!a.is_array() || a.size() != nt) throw SchemaError(std::string("/") + key, "expected one entry per time");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!a[i].is_null()) get_number(a[i], std::string("/") + key + "/" + std::to_string(i));
  }
  const std::string v = get_string(required(j, "", "verdict"), "/verdict");
  if (v != "PASS" && v != "FAIL") throw SchemaError("/verdict", "verdict must be PASS or FAIL");
}

}  // namespace

void validate_artifact(const std::string& path) {
  if (ends_with(path, ".residuals.csv")) {
    const auto h = read_header(path);
    const int n = count_prefixed(h, 'x');
    std::vector<std::string> want = {"equation_id"};
    for (int i = 1; i <= n; ++i) want.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) want.push_back("v" + std::to_string(i));
    for (const char* c : {"v_mod", "theta", "raw_norm", "scale", "normalized"}) want.push_back(c);
    if (n < 1) throw SchemaError("", path + ": no coordinate columns");
    check_csv(path, want, 1);
  } else if (ends_with(path, ".wavefront.csv")) {
    const auto h = read_header(path);
    const int k = count_prefixed(h, 'i'), n = count_prefixed(h, 'x');
    std::vector<std::string> want = {"t"};
    for (int i = 1; i <= k; ++i) want.push_back("i" + std::to_string(i));
    for (int i = 1; i <= n; ++i) want.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) want.push_back("v" + std::to_string(i));
    want.push_back("dev");
    if (n < 2 || k < 1) throw SchemaError("", path + ": missing index or coordinate columns");
    check_csv(path, want, 0);
  } else if (ends_with(path, ".characteristics.csv")) {
    check_csv(path, {"t", "theta", "z", "v", "I1", "I2", "relation"}, 0);
  } else if (ends_with(path, ".summary.json")) {
    const Json j = io::read_json_file(path);
    require_object(j, "");
    const std::string task = j.contains("task") ? get_string(j["task"], "/task") : "residuals";
    if (task == "residuals") {
      io::validate_summary(j);
    } else if (task == "blowup" || task == "shift") {
      validate_wavefront_summary(j);
    } else if (task == "characteristics") {
      reject_unknown(j, "",
                     {"task", "field", "theta0", "v0", "z0", "t_end", "step", "states", "halted", "I1_drift",
                      "I2_drift", "relation_max", "verdict"});
      for (const char* key : {"theta0", "v0", "z0", "t_end", "step", "I1_drift", "I2_drift", "relation_max"})
        get_number(required(j, "", key), std::string("/") + key);
      if (get_int(required(j, "", "states"), "/states") <= 0) throw SchemaError("/states", "no samples");
      get_bool(required(j, "", "halted"), "/halted");
      get_string(required(j, "", "verdict"), "/verdict");
    } else if (task == "cosfit") {
      reject_unknown(j, "", {"task", "field", "v", "count", "H_hat", "C_hat", "relative_misfit"});
      for (const char* key : {"v", "H_hat", "C_hat", "relative_misfit"})
        get_number(required(j, "", key), std::string("/") + key);
      const double m = j["relative_misfit"].get<double>();
      if (m < 0.0 || m > 1.0 + 1e-12) throw SchemaError("/relative_misfit", "misfit must lie in [0, 1]");
      if (get_int(required(j, "", "count"), "/count") < 32) throw SchemaError("/count", "too few samples");
    } else {
      throw SchemaError("/task", "unknown task");
    }
  } else if (ends_with(path, ".wavefront.svg")) {
    std::ifstream is(path);
    std::string first;
    if (!is || !std::getline(is, first) || first.rfind("<svg ", 0) != 0)
      throw SchemaError("", path + ": not an SVG document");
  } else {
    throw SchemaError("", path + ": unknown artifact type");
  }
}

}  // namespace nslab::experiment
