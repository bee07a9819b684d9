// nslab: command-line front end of the normality lab.
//
//   nslab residuals --field axial.json --equation weak2 --samples 200
//   nslab blowup --field axial.json --nu0 6.0 --n 3 --t 0.5
//   nslab report --in a.summary.json b.summary.json
//
// Exit status: 0 PASS (or no verdict), 1 FAIL / INCONCLUSIVE / numeric failure,
// 2 usage or schema error.

#include "nslab/experiment.hpp"
#include "nslab/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace nslab;

namespace {

struct Common {
  std::string field;
  int n = 0;
  std::string out;
};

struct WaveArgs {
  std::vector<double> t;
  int frames = 4;
  std::vector<int> mesh;
  double tol = 1e-4;
  double rtol = 1e-10;
  double atol = 1e-12;
};

void add_common(CLI::App* sub, Common& c, bool field_required = true) {
  auto* f = sub->add_option("--field", c.field, "field document (JSON)")->check(CLI::ExistingFile);
  if (field_required) f->required();
  sub->add_option("--n", c.n, "space dimension (overrides the document)")->check(CLI::Range(2, 64));
  sub->add_option("--out", c.out, "output path prefix");
}

void add_wave(CLI::App* sub, WaveArgs& w) {
  sub->add_option("--t", w.t, "final time, or an explicit ascending list of output times")
      ->required()
      ->delimiter(',');
  sub->add_option("--frames", w.frames, "output intervals when --t is a single time")->check(CLI::PositiveNumber);
  sub->add_option("--mesh", w.mesh, "nodes per parameter direction")->delimiter(',');
  sub->add_option("--tol", w.tol, "orthogonality tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--rtol", w.rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--atol", w.atol, "integrator absolute tolerance")->check(CLI::PositiveNumber);
}

io::FieldSpec load_field(const Common& c) {
  io::FieldSpec f = io::field_from_json(io::read_json_file(c.field));
  if (c.n > 0) f = io::with_dimension(f, c.n);
  return f;
}

experiment::WavefrontOptions wave_options(const WaveArgs& w) {
  experiment::WavefrontOptions o;
  if (w.t.size() == 1) {
    for (int k = 0; k <= w.frames; ++k) o.times.push_back(w.t[0] * k / w.frames);
  } else {
    o.times = w.t;
  }
  for (std::size_t i = 0; i < o.times.size(); ++i)
    if (o.times[i] < 0.0 || (i > 0 && o.times[i] < o.times[i - 1]))
      throw SchemaError("--t", "times must be ascending and non-negative");
  o.mesh = w.mesh;
  o.tolerance = w.tol;
  o.rtol = w.rtol;
  o.atol = w.atol;
  return o;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normality lab: axial weak-normality field, residuals, blow-ups and shifts"};
  app.require_subcommand(1);

  Common common;
  WaveArgs wave;

  auto* build = app.add_subcommand("build-field", "validate a field document and print its canonical form");
  add_common(build, common);

  auto* residuals = app.add_subcommand("residuals", "normality residuals on random phase samples");
  add_common(residuals, common);
  experiment::ResidualsTask rt;
  std::vector<double> v_range;
  residuals->add_option("--equation", rt.equation, "weak1|weak2|additional|scalar|homogeneous|polar");
  residuals->add_option("--samples", rt.samples, "number of samples")->check(CLI::NonNegativeNumber);
  residuals->add_option("--seed", rt.seed, "random seed");
  residuals->add_option("--v-range", v_range, "speed interval lo,hi")->delimiter(',')->expected(2);

  auto* blow = app.add_subcommand("blowup", "normal blow-up of a point");
  add_common(blow, common);
  add_wave(blow, wave);
  experiment::BlowupTask bt;
  std::vector<double> point;
  blow->add_option("--nu0", bt.nu0, "initial speed")->required();
  blow->add_option("--point", point, "blown-up point (default origin)")->delimiter(',');

  auto* sh = app.add_subcommand("shift", "shift of a plane or sphere along trajectories");
  add_common(sh, common);
  add_wave(sh, wave);
  experiment::ShiftTask st;
  std::string chart = "plane";
  std::vector<double> normal;
  sh->add_option("--chart", chart, "plane|sphere")->check(CLI::IsMember({"plane", "sphere"}));
  sh->add_option("--point", point, "plane point or sphere centre")->delimiter(',')->required();
  sh->add_option("--normal", normal, "plane normal")->delimiter(',');
  sh->add_option("--radius", st.chart.radius, "sphere radius")->check(CLI::PositiveNumber);
  sh->add_option("--extent", st.chart.extent, "plane half-width")->check(CLI::PositiveNumber);
  sh->add_option("--nu", st.nu, "initial speed: number or expression in x1..xn");

  auto* ch = app.add_subcommand("characteristics", "RK4 characteristics of the z equation");
  add_common(ch, common);
  experiment::CharacteristicsTask ct;
  ch->add_option("--theta", ct.theta, "initial polar angle");
  ch->add_option("--v", ct.v, "initial speed")->check(CLI::PositiveNumber);
  ch->add_option("--t", ct.t_end, "final time")->check(CLI::PositiveNumber);
  ch->add_option("--step", ct.step, "RK4 step")->check(CLI::PositiveNumber);

  auto* cf = app.add_subcommand("cosfit", "least-squares misfit of A(v, .) on span{1, cos}");
  add_common(cf, common);
  experiment::CosfitTask ft;
  double cos_v = 0.0;
  cf->add_option("--v", cos_v, "speed (default 2 v0 for axial fields)")->check(CLI::PositiveNumber);
  cf->add_option("--count", ft.count, "theta samples")->check(CLI::Range(32, 1 << 20));

  auto* rep = app.add_subcommand("report", "summary table over summary documents");
  std::vector<std::string> inputs;
  std::string rep_out;
  rep->add_option("--in", inputs, "summary JSON files")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", rep_out, "write the table here as well");

  auto* runc = app.add_subcommand("run", "run an experiment document");
  std::string config_path;
  runc->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*build) {
      const std::string text = io::dump(io::to_json(load_field(common)));
      if (common.out.empty()) std::cout << text;
      else io::write_text_file(common.out, text);
      return 0;
    }
    if (*rep) {
      const std::string table = experiment::report(inputs);
      std::cout << table;
      if (!rep_out.empty()) io::write_text_file(rep_out, table);
      return 0;
    }

    experiment::ExperimentConfig config;
    if (*runc) {
      config = experiment::config_from_json(io::read_json_file(config_path));
    } else {
      config.field = load_field(common);
      if (*residuals) {
        if (!v_range.empty()) rt.v_range = {v_range[0], v_range[1]};
        config.task = rt;
      } else if (*blow) {
        if (!point.empty()) bt.point = to_vec(point);
        bt.wave = wave_options(wave);
        config.task = bt;
      } else if (*sh) {
        st.chart.kind = chart == "plane" ? dynamics::Chart::Kind::Plane : dynamics::Chart::Kind::Sphere;
        st.chart.point = to_vec(point);
        if (st.chart.kind == dynamics::Chart::Kind::Plane) {
          if (normal.empty()) throw SchemaError("--normal", "a plane chart needs a normal");
          st.chart.normal = to_vec(normal);
        }
        st.wave = wave_options(wave);
        config.task = st;
      } else if (*ch) {
        config.task = ct;
      } else {
        if (cos_v > 0.0) ft.v = cos_v;
        config.task = ft;
      }
      config.output = common.out.empty() ? std::string("nslab_") + experiment::task_kind(config.task) : common.out;
      // one validation path for the command line and for documents
      config = experiment::config_from_json(experiment::to_json(config));
    }
    return experiment::run(config, std::cout).exit_code;
  } catch (const SchemaError& e) {
    std::cerr << "nslab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "nslab: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "nslab: numeric failure: " << e.what() << "\n";
    return 1;
  }
}
