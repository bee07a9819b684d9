#pragma once

#include "nslab/dynamics.hpp"
#include "nslab/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nslab::experiment {

struct ResidualsTask {
  std::string equation = "weak2";
  int samples = 200;
  std::uint64_t seed = 1;
  /// Speed interval; default (v0, 3 v0) for axial fields, (1, 5) otherwise.
  std::optional<std::pair<double, double>> v_range;
};

struct WavefrontOptions {
  std::vector<double> times;           // output times, ascending, starting at 0
  std::vector<int> mesh;               // empty: {64, 128} for n = 3, else 16 per direction
  double tolerance = 1e-4;             // max_dev verdict threshold
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct BlowupTask {
  double nu0 = 6.0;
  Vec point;  // empty: origin
  WavefrontOptions wave;
};

struct ShiftTask {
  dynamics::Chart chart;
  std::string nu = "1";  // constant or expression in x1..xn
  WavefrontOptions wave;
};

struct CharacteristicsTask {
  double theta = 1.0;
  double v = 6.0;
  double t_end = 1.0;
  double step = 1e-3;
};

struct CosfitTask {
  std::optional<double> v;  // default 2 v0 for axial fields, 2 otherwise
  int count = 64;
};

using Task = std::variant<ResidualsTask, BlowupTask, ShiftTask, CharacteristicsTask, CosfitTask>;

/// "residuals", "blowup", "shift", "characteristics" or "cosfit".
const char* task_kind(const Task& t);

/// Document layout:
///   {"field": {"axial"|"mdtype"|"wfunction": {...}},
///    "task":  {"residuals"|"blowup"|"shift"|"characteristics"|"cosfit": {...}},
///    "output": "path prefix"}
struct ExperimentConfig {
  io::FieldSpec field;
  Task task;
  std::string output = "nslab_out";
};

ExperimentConfig config_from_json(const io::Json& j);
io::Json to_json(const ExperimentConfig& c);

struct RunResult {
  int exit_code = 0;  // 0 PASS or no verdict, 1 FAIL/INCONCLUSIVE or numeric failure
  std::string verdict;  // empty when the task defines none
  std::vector<std::string> artifacts;
};

/// Runs one task and writes its artifacts next to `output`. A one-line
/// summary goes to `log`. Throws SchemaError/DomainError for bad input.
RunResult run(const ExperimentConfig& config, std::ostream& log);

/// Table over summary documents written by `run`, one row per document in
/// the given order. Throws DomainError("no samples") for an empty report.
std::string report(const std::vector<std::string>& summary_paths);

/// Checks an artifact written by `run` against its documented layout
/// (chosen by file name suffix). Throws SchemaError on mismatch.
void validate_artifact(const std::string& path);

}  // namespace nslab::experiment
