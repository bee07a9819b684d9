#include "nslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nslab::io {

namespace schema {

void require_object(const Json& j, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "expected an object");
}

void reject_unknown(const Json& j, const std::string& at, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw SchemaError(at + "/" + key, "unknown key");
}

const Json& required(const Json& j, const std::string& at, const std::string& key) {
  if (!j.contains(key)) throw SchemaError(at + "/" + key, "missing required key");
  return j.at(key);
}

double get_number(const Json& j, const std::string& at) {
  if (!j.is_number()) throw SchemaError(at, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(at, "expected a finite number");
  return x;
}

int get_int(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) throw SchemaError(at, "expected an integer");
  return j.get<int>();
}

std::string get_string(const Json& j, const std::string& at) {
  if (!j.is_string()) throw SchemaError(at, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const Json& j, const std::string& at) {
  if (!j.is_boolean()) throw SchemaError(at, "expected a boolean");
  return j.get<bool>();
}

Vec get_vec(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw SchemaError(at, "expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = get_number(j[i], at + "/" + std::to_string(i));
  return v;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Unit axis of the given dimension; tolerates rounding in hand-written documents.
Vec get_axis(const Json& j, const std::string& at, int dimension) {
  Vec a = get_vec(j, at);
  if (a.size() != dimension) throw SchemaError(at, "axis length differs from dimension");
  const double len = a.norm();
  if (std::abs(len - 1.0) > 1e-9) throw SchemaError(at, "axis must be a unit vector");
  return a / len;
}

int get_dimension(const Json& j, const std::string& at, int min_dim) {
  const int d = get_int(j, at);
  if (d < min_dim) throw SchemaError(at, "dimension must be at least " + std::to_string(min_dim));
  return d;
}

}  // namespace schema

using namespace schema;

namespace {

// Message of a SchemaError without its leading pointer.
std::string bare(const SchemaError& e) {
  const std::string w = e.what();
  const std::string lead = e.path() + ": ";
  return w.compare(0, lead.size(), lead) == 0 ? w.substr(lead.size()) : w;
}

}  // namespace

axial::AxialFieldSpec axial_from_json(const Json& j, const std::string& at) {
  require_object(j, at);
  reject_unknown(j, at, {"profile", "v0", "cutoff_margin", "dimension", "axis"});
  axial::AxialFieldSpec spec = axial::canonical_spec();

  const Json& p = required(j, at, "profile");
  const std::string pat = at + "/profile";
  require_object(p, pat);
  reject_unknown(p, pat, {"kind", "alpha", "beta"});
  axial::ProfileKind kind;
  try {
    kind = axial::AxialProfile::parse_kind(get_string(required(p, pat, "kind"), pat + "/kind"));
  } catch (const DomainError& e) {
    throw SchemaError(pat + "/kind", e.what());
  }
  const double alpha = p.contains("alpha") ? get_number(p["alpha"], pat + "/alpha") : 1.0;
  const double beta = p.contains("beta") ? get_number(p["beta"], pat + "/beta") : 1.0;
  if (!(alpha > 0.0)) throw SchemaError(pat + "/alpha", "must be positive");
  if (!(beta > 0.0)) throw SchemaError(pat + "/beta", "must be positive");
  spec.profile = axial::AxialProfile(kind, alpha, beta);

  if (j.contains("v0")) spec.v0 = get_number(j["v0"], at + "/v0");
  if (j.contains("cutoff_margin")) spec.cutoff_margin = get_number(j["cutoff_margin"], at + "/cutoff_margin");
  if (j.contains("dimension")) spec.dimension = get_dimension(j["dimension"], at + "/dimension", 2);
  if (j.contains("axis")) spec.axis = get_axis(j["axis"], at + "/axis", spec.dimension);
  if (!(spec.cutoff_margin > 0.0)) throw SchemaError(at + "/cutoff_margin", "must be positive");
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw SchemaError(at + "/v0", e.what());
  }
  return spec;
}

Json to_json(const axial::AxialFieldSpec& spec) {
  Json j;
  j["profile"] = {{"kind", axial::AxialProfile::kind_name(spec.profile.kind())},
                  {"alpha", spec.profile.alpha()},
                  {"beta", spec.profile.beta()}};
  j["v0"] = spec.v0;
  j["cutoff_margin"] = spec.cutoff_margin;
  j["dimension"] = spec.dimension;
  j["axis"] = vec_json(spec.axis_or_default());
  return j;
}

ansatz::MdTypeSpec mdtype_from_json(const Json& j, const std::string& at) {
  require_object(j, at);
  reject_unknown(j, at, {"h", "C", "H", "kappa", "free", "dimension", "axis"});
  ansatz::MdTypeSpec spec;
  spec.h = get_int(required(j, at, "h"), at + "/h");
  if (spec.h != 0 && spec.h != 1) throw SchemaError(at + "/h", "h must be 0 or 1");
  if (j.contains("C")) spec.C_text = get_string(j["C"], at + "/C");
  if (j.contains("H")) spec.H_text = get_string(j["H"], at + "/H");
  if (j.contains("kappa")) spec.kappa = get_number(j["kappa"], at + "/kappa");
  if (j.contains("free")) spec.free = get_bool(j["free"], at + "/free");
  if (j.contains("dimension")) spec.dimension = get_dimension(j["dimension"], at + "/dimension", 2);
  if (j.contains("axis")) spec.axis = get_axis(j["axis"], at + "/axis", spec.dimension);
  try {
    spec.validate();
  } catch (const SchemaError& e) {
    throw SchemaError(at + e.path(), bare(e));
  }
  return spec;
}

Json to_json(const ansatz::MdTypeSpec& spec) {
  Json j;
  j["h"] = spec.h;
  j["C"] = spec.C_text;
  j["H"] = spec.H_text;
  j["kappa"] = spec.kappa;
  j["free"] = spec.free;
  j["dimension"] = spec.dimension;
  j["axis"] = vec_json(spec.axis_or_default());
  return j;
}

ansatz::WFunctionSpec wfunction_from_json(const Json& j, const std::string& at) {
  require_object(j, at);
  reject_unknown(j, at, {"h", "W", "dimension", "gauge"});
  const int h = get_int(required(j, at, "h"), at + "/h");
  const std::string W = get_string(required(j, at, "W"), at + "/W");
  const int dim = j.contains("dimension") ? get_dimension(j["dimension"], at + "/dimension", 1) : 3;
  ansatz::WFunctionSpec spec;
  try {
    spec = ansatz::make_w_spec(h, W, dim);
  } catch (const SchemaError& e) {
    throw SchemaError(at + e.path(), bare(e));
  }
  if (j.contains("gauge")) {
    const Json& g = j["gauge"];
    if (!g.is_array()) throw SchemaError(at + "/gauge", "expected an array of expressions in w");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string gat = at + "/gauge/" + std::to_string(i);
      const std::string rho = get_string(g[i], gat);
      try {
        spec = ansatz::gauge_apply(spec, rho);
      } catch (const SchemaError& e) {
        throw SchemaError(gat, bare(e));
      } catch (const DomainError& e) {
        throw SchemaError(gat, e.what());
      }
    }
  }
  return spec;
}

Json to_json(const ansatz::WFunctionSpec& spec) {
  Json j;
  j["h"] = spec.h;
  j["W"] = spec.W_text;
  j["dimension"] = spec.dimension;
  if (!spec.gauges.empty()) {
    Json g = Json::array();
    for (const auto& gauge : spec.gauges) g.push_back(gauge.text);
    j["gauge"] = g;
  }
  return j;
}

const char* field_kind(const FieldSpec& f) {
  switch (f.index()) {
    case 0: return "axial";
    case 1: return "mdtype";
    default: return "wfunction";
  }
}

FieldSpec field_from_json(const Json& j, const std::string& at) {
  require_object(j, at);
  if (j.contains("profile")) return axial_from_json(j, at);
  if (j.contains("W")) return wfunction_from_json(j, at);
  return mdtype_from_json(j, at);
}

Json to_json(const FieldSpec& f) {
  return std::visit([](const auto& s) { return to_json(s); }, f);
}

int field_dimension(const FieldSpec& f) {
  return std::visit([](const auto& s) { return s.dimension; }, f);
}

FieldSpec with_dimension(const FieldSpec& f, int dimension) {
  if (dimension < 2) throw DomainError("dimension must be at least 2");
  if (const auto* w = std::get_if<ansatz::WFunctionSpec>(&f)) {
    if (w->dimension == dimension) return f;
    ansatz::WFunctionSpec out = ansatz::make_w_spec(w->h, w->W_text, dimension);
    for (const auto& g : w->gauges) out = ansatz::gauge_apply(out, g.text);
    return out;
  }
  return std::visit(
      [dimension](auto s) -> FieldSpec {
        if constexpr (!std::is_same_v<decltype(s), ansatz::WFunctionSpec>) {
          if (s.dimension != dimension) {
            s.dimension = dimension;
            s.axis = Vec();
          }
        }
        return s;
      },
      f);
}

normality::FieldBundle make_bundle(const FieldSpec& f) {
  normality::FieldBundle b;
  if (const auto* a = std::get_if<axial::AxialFieldSpec>(&f)) {
    b.A = axial::lift_to_field(*a);
    b.F = axial::force_field(*a);
    b.polar = [spec = *a](double v, double th) { return axial::A_polar(spec, v, th); };
    b.axis = a->axis_or_default();
  } else if (const auto* m = std::get_if<ansatz::MdTypeSpec>(&f)) {
    b.A = ansatz::mdtype_field(*m);
    b.F = ansatz::force_from_A(b.A);
    b.polar = [spec = *m](double v, double th) { return ansatz::mdtype_axial_A(spec, v, th); };
    b.axis = m->axis_or_default();
  } else {
    const auto& w = std::get<ansatz::WFunctionSpec>(f);
    b.A = ansatz::scalar_field_from_W(w);
    b.F = ansatz::force_field_from_W(w);
    b.axis = Vec::Unit(w.dimension, w.dimension - 1);
  }
  return b;
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("", "cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot write " + path);
  os << text;
  if (!os) throw DomainError("write failed: " + path);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string residual_csv(const normality::ResidualReport& r) {
  if (r.samples.empty()) throw DomainError("no samples");
  const int n = static_cast<int>(r.samples.front().v.size());
  std::ostringstream os;
  os << "equation_id";
  for (int i = 0; i < n; ++i) os << ",x" << i + 1;
  for (int i = 0; i < n; ++i) os << ",v" << i + 1;
  os << ",v_mod,theta,raw_norm,scale,normalized\n";
  for (const auto& s : r.samples) {
    os << r.equation_id;
    for (int i = 0; i < n; ++i) os << ',' << format_double(s.x[i]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(s.v[i]);
    os << ',' << format_double(s.v_mod) << ',' << format_double(s.theta) << ','
       << format_double(s.raw_norm) << ',' << format_double(s.scale) << ','
       << format_double(s.normalized) << '\n';
  }
  return os.str();
}

Json summary_json(const normality::ResidualReport& r) {
  const normality::Summary s = r.summary();
  Json j;
  j["equation_id"] = r.equation_id;
  j["grid"] = r.grid;
  j["count"] = s.count;
  j["max"] = s.max;
  j["mean"] = s.mean;
  j["p50"] = s.p50;
  j["p95"] = s.p95;
  j["pass_fraction"] = s.pass_fraction;
  j["fail_fraction"] = s.fail_fraction;
  j["verdict"] = normality::verdict_name(s.verdict);
  return j;
}

void validate_summary(const Json& j, const std::string& at) {
  require_object(j, at);
  reject_unknown(j, at,
                 {"task", "field", "equation_id", "grid", "count", "max", "mean", "p50", "p95", "pass_fraction",
                  "fail_fraction", "verdict"});
  if (j.contains("task") && get_string(j["task"], at + "/task") != "residuals")
    throw SchemaError(at + "/task", "not a residual summary");
  if (j.contains("field")) get_string(j["field"], at + "/field");
  get_string(required(j, at, "equation_id"), at + "/equation_id");
  get_string(required(j, at, "grid"), at + "/grid");
  const int count = get_int(required(j, at, "count"), at + "/count");
  if (count <= 0) throw SchemaError(at + "/count", "no samples");
  for (const char* key : {"max", "mean", "p50", "p95", "pass_fraction", "fail_fraction"}) {
    const double x = get_number(required(j, at, key), at + "/" + key);
    if (x < 0.0) throw SchemaError(at + "/" + key, "must be non-negative");
  }
  const std::string v = get_string(required(j, at, "verdict"), at + "/verdict");
  if (v != "PASS" && v != "FAIL" && v != "INCONCLUSIVE")
    throw SchemaError(at + "/verdict", "verdict must be PASS, FAIL or INCONCLUSIVE");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nslab::io
