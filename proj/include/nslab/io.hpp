#pragma once

#include "nslab/ansatz.hpp"
#include "nslab/axial.hpp"
#include "nslab/normality.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <variant>

namespace nslab::io {

using Json = nlohmann::ordered_json;

// Checked accessors; errors carry the JSON pointer `at`.
namespace schema {
void require_object(const Json& j, const std::string& at);
void reject_unknown(const Json& j, const std::string& at, const std::set<std::string>& allowed);
const Json& required(const Json& j, const std::string& at, const std::string& key);
double get_number(const Json& j, const std::string& at);
int get_int(const Json& j, const std::string& at);
std::string get_string(const Json& j, const std::string& at);
bool get_bool(const Json& j, const std::string& at);
Vec get_vec(const Json& j, const std::string& at);
Json vec_json(const Vec& v);
Vec get_axis(const Json& j, const std::string& at, int dimension);
int get_dimension(const Json& j, const std::string& at, int min_dim);
}  // namespace schema

// Field documents. Every reader rejects unknown keys and wrong types with a
// SchemaError naming the JSON pointer of the offending value.
//
//   axial:     {"profile": {"kind": "log"|"sqrt", "alpha": 1.0, "beta": 1.0},
//               "v0": 3.0, "cutoff_margin": 0.05, "dimension": 3, "axis": [0,0,1]}
//   mdtype:    {"h": 0|1, "C": "v^2", "H": "1", "kappa": 1.0,
//               optional "free": false, "dimension": 3, "axis": [...]}
//   wfunction: {"h": 0|1, "W": "x1*v", optional "dimension": 3, "gauge": ["2*w", ...]}
//
// Only "profile" is required for axial; the rest default to the canonical
// values. mdtype requires "h"; wfunction requires "h" and "W".

axial::AxialFieldSpec axial_from_json(const Json& j, const std::string& at = "");
Json to_json(const axial::AxialFieldSpec& spec);

ansatz::MdTypeSpec mdtype_from_json(const Json& j, const std::string& at = "");
Json to_json(const ansatz::MdTypeSpec& spec);

ansatz::WFunctionSpec wfunction_from_json(const Json& j, const std::string& at = "");
Json to_json(const ansatz::WFunctionSpec& spec);

using FieldSpec = std::variant<axial::AxialFieldSpec, ansatz::MdTypeSpec, ansatz::WFunctionSpec>;

/// "axial", "mdtype" or "wfunction".
const char* field_kind(const FieldSpec& f);

/// Detects the document kind from its keys: "profile" -> axial, "W" ->
/// wfunction, otherwise mdtype.
FieldSpec field_from_json(const Json& j, const std::string& at = "");
Json to_json(const FieldSpec& f);

/// Bundle for residual evaluation. Axial fields use the direct force.
normality::FieldBundle make_bundle(const FieldSpec& f);
int field_dimension(const FieldSpec& f);
FieldSpec with_dimension(const FieldSpec& f, int dimension);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// %.17g, "nan", "inf", "-inf".
std::string format_double(double x);

// Residual reports.
//   CSV: equation_id, x1..xn, v1..vn, v_mod, theta, raw_norm, scale, normalized
//   summary JSON: {"equation_id", "grid", "count", "max", "mean", "p50", "p95",
//                  "pass_fraction", "fail_fraction", "verdict"}, optionally
//                  preceded by "task": "residuals" and "field"
std::string residual_csv(const normality::ResidualReport& r);
Json summary_json(const normality::ResidualReport& r);

/// Checks a summary document against the layout above.
void validate_summary(const Json& j, const std::string& at = "");

/// Serialized with 2-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace nslab::io
