// Drives the nslab executable through std::system.

#include "nslab/experiment.hpp"
#include "nslab/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nslab;
namespace fs = std::filesystem;

namespace {

const fs::path& work() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "nslab_test_cli";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string at(const std::string& name) { return (work() / name).string(); }

int cli(const std::string& args) {
  const std::string cmd = std::string(NSLAB_CLI) + " " + args + " >" + at("stdout.txt") + " 2>" + at("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& name, const std::string& text) { io::write_text_file(at(name), text); }

const std::string& axial_doc() {
  static const std::string path = [] {
    put("axial.json", R"({"profile": {"kind": "log", "alpha": 1.0, "beta": 1.0}, "v0": 3.0,
                         "cutoff_margin": 0.05, "dimension": 3, "axis": [0, 0, 1]})");
    return at("axial.json");
  }();
  return path;
}

}  // namespace

TEST_CASE("build-field prints the canonical document") {
  CHECK(cli("build-field --field " + axial_doc()) == 0);
  const auto j = io::Json::parse(slurp(at("stdout.txt")));
  CHECK(j["profile"]["kind"] == "log");
  CHECK(cli("build-field --field " + axial_doc() + " --n 4") == 0);
  CHECK(io::Json::parse(slurp(at("stdout.txt")))["dimension"] == 4);
}

TEST_CASE("weak residuals pass and reruns are byte-identical") {
  const std::string args = "residuals --field " + axial_doc() + " --equation weak2 --samples 40 --seed 5 --out ";
  REQUIRE(cli(args + at("w1")) == 0);
  REQUIRE(cli(args + at("w2")) == 0);
  const std::string a = slurp(at("w1.residuals.csv"));
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(at("w2.residuals.csv")));
  CHECK(slurp(at("w1.summary.json")) == slurp(at("w2.summary.json")));
  CHECK(io::read_json_file(at("w1.summary.json"))["verdict"] == "PASS");
  CHECK_NOTHROW(experiment::validate_artifact(at("w1.residuals.csv")));
  CHECK_NOTHROW(experiment::validate_artifact(at("w1.summary.json")));

  REQUIRE(cli("residuals --field " + axial_doc() + " --equation weak2 --samples 40 --seed 6 --out " + at("w3")) == 0);
  CHECK(slurp(at("w3.residuals.csv")) != a);
}

TEST_CASE("additional residuals fail and the report shows the separation") {
  CHECK(cli("residuals --field " + axial_doc() + " --equation additional --samples 100 --out " + at("add")) == 1);
  CHECK(io::read_json_file(at("add.summary.json"))["verdict"] == "FAIL");
  REQUIRE(cli("residuals --field " + axial_doc() + " --equation weak2 --samples 20 --out " + at("weak")) == 0);
  CHECK(cli("report --in " + at("weak.summary.json") + " " + at("add.summary.json") + " --out " + at("table.txt")) == 0);
  const std::string table = slurp(at("table.txt"));
  CHECK(table == slurp(at("stdout.txt")));
  CHECK(table.find("class separation") != std::string::npos);
  CHECK(table.find("additional") != std::string::npos);
  CHECK(table.find("PASS") < table.find("FAIL"));
}

TEST_CASE("blow-up writes a wavefront CSV, an SVG section and a summary") {
  CHECK(cli("blowup --field " + axial_doc() + " --nu0 6.0 --n 3 --t 0.5 --frames 2 --mesh 16,32 --out " + at("blow")) == 0);
  for (const char* suffix : {".wavefront.csv", ".wavefront.svg", ".summary.json"}) {
    CAPTURE(suffix);
    CHECK_NOTHROW(experiment::validate_artifact(at(std::string("blow") + suffix)));
  }
  const auto s = io::read_json_file(at("blow.summary.json"));
  CHECK(s["task"] == "blowup");
  CHECK(s["times"].size() == 3);
  REQUIRE(s["max_dev"].size() == 3);
  // at t = 0 every node sits on the blown-up point: no tangents
  CHECK(s["max_dev"][0].is_null());
  for (int k = 1; k < 3; ++k) CHECK(s["max_dev"][k].get<double>() <= 1e-3);
  CHECK(s["verdict"] == "PASS");
}

TEST_CASE("shift, characteristics, cosfit and run") {
  CHECK(cli("shift --field " + axial_doc() + " --chart plane --point 0,0,0 --normal 0,0,1 --nu 6 --t 0.3 --frames 1 --mesh 9,9 --out " +
              at("sh")) <= 1);
  CHECK_NOTHROW(experiment::validate_artifact(at("sh.summary.json")));
  CHECK_NOTHROW(experiment::validate_artifact(at("sh.wavefront.csv")));

  CHECK(cli("characteristics --field " + axial_doc() + " --theta 1.0 --v 6 --t 0.5 --out " + at("ch")) == 0);
  CHECK_NOTHROW(experiment::validate_artifact(at("ch.characteristics.csv")));
  CHECK_NOTHROW(experiment::validate_artifact(at("ch.summary.json")));

  CHECK(cli("cosfit --field " + axial_doc() + " --v 6 --out " + at("cf")) == 0);
  const auto cf = io::read_json_file(at("cf.summary.json"));
  CHECK(cf["relative_misfit"].get<double>() > 0.0);
  CHECK_FALSE(cf.contains("verdict"));

  put("run.json", R"({"field": {"mdtype": {"h": 1, "H": "1", "kappa": 1.0}},
                      "task": {"residuals": {"equation": "additional", "samples": 30}},
                      "output": ")" + at("md") + R"("})");
  CHECK(cli("run --config " + at("run.json")) == 0);
  CHECK(io::read_json_file(at("md.summary.json"))["verdict"] == "PASS");
}

TEST_CASE("usage and schema errors exit with 2") {
  CHECK(cli("") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("residuals --field " + axial_doc() + " --equation strong") == 2);
  CHECK(slurp(at("stderr.txt")).find("equation") != std::string::npos);
  CHECK(cli("residuals --field " + axial_doc() + " --samples 0 --out " + at("zero")) == 2);
  CHECK(cli("residuals --field " + at("nonexistent.json")) == 2);
  CHECK(cli("blowup --field " + axial_doc() + " --nu0 6 --t 1,0.5") == 2);

  put("bad.json", R"({"profile": {"kind": "log", "alpha": 1.0, "beta": 1.0}, "v0": 3.0, "colour": "red"})");
  CHECK(cli("build-field --field " + at("bad.json")) == 2);
  CHECK(slurp(at("stderr.txt")).find("/colour") != std::string::npos);

  put("empty.summary.json", "{}");
  CHECK(cli("report --in " + at("empty.summary.json")) == 2);
  CHECK(cli("--help") == 0);
}
