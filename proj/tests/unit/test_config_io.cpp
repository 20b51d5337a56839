#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "inflow/config.hpp"
#include "inflow/errors.hpp"
#include "inflow/experiment.hpp"
#include "inflow/io.hpp"

using namespace inflow;
using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("inflow_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.exponents.delta = 1.0;
  c.delta_from_states = false;
  c.perturbation.enabled = false;
  c.perturbation.beta = 3.0;
  c.N = 400;
  c.t_end = 0.5;
  c.snapshot_cadence = 0.1;
  c.out_dir = out;
  c.write_profile = false;
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  const json j = json::parse(R"({
    "gas": {"gamma": 1.4, "mu": 0.5},
    "states": {"v_minus": 1, "u_minus": 0.2, "v_plus": 1.3},
    "grid": {"L": 50, "N": 1000},
    "run": {"t_end": 2, "snapshot_cadence": 0.25, "seed": 9},
    "perturbation": {"enabled": true,
                     "f": {"kind": "wavelet", "amplitude": 2, "center": 3, "radius": 1, "waves": 1.5}},
    "output": {"directory": "x", "tag": "t1"}
  })");
  const RunConfig c = parse_config(j);
  CHECK(c.gas.gamma == 1.4);
  CHECK(c.u_minus == 0.2);
  CHECK(c.L.value() == 50.0);
  CHECK(c.f.kind == TemplateKind::Wavelet);
  CHECK(c.f.amplitude == 2.0);
  CHECK(c.g.kind == TemplateKind::Zero);
  const RunConfig d = parse_config(to_json(c));
  CHECK(to_json(d) == to_json(c));
  CHECK(config_hash(d) == config_hash(c));

  RunConfig e = c;
  e.out_dir = "elsewhere";
  CHECK(config_hash(e) == config_hash(c));
  e.N = 1001;
  CHECK(config_hash(e) != config_hash(c));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"gas": {"gama": 2}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/inflow.json"), ConfigError);
  RunConfig c;
  c.v_minus = -1.0;
  CHECK_THROWS(validate(c));
}

TEST_CASE("hash function") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("CSV round trip is exact") {
  const fs::path d = scratch("csv");
  CsvTable t;
  t.meta = {{"k", 1}};
  t.columns = {"a", "b"};
  t.rows = {{0.1, 1.0 / 3.0}, {-2.5e-300, 6.02214076e23}};
  write_csv(d / "t.csv", t);
  const CsvTable r = read_csv(d / "t.csv");
  CHECK(r.meta == t.meta);
  CHECK(r.columns == t.columns);
  CHECK(r.rows == t.rows);
  CHECK_THROWS_AS(r.column("c"), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::Config) == 2);
  CHECK(exit_code(ErrorKind::Degenerate) == 3);
  CHECK(exit_code(ErrorKind::Inadmissible) == 3);
  CHECK(exit_code(ErrorKind::BlowUp) == 4);
  CHECK(exit_code(ErrorKind::Timeout) == 5);
}

TEST_CASE("classification of end states") {
  RunConfig c;
  json r = classify_report(c);
  CHECK(r["w_minus"]["region"] == "subsonic");
  CHECK(r["w_plus"]["u"].get<double>() == Approx(0.5 - std::sqrt(0.75)).epsilon(1e-12));
  CHECK(r["membership"] == "S2(w-)");

  c.v_plus = c.v_minus;
  CHECK(classify_report(c)["membership"] == "anchor-coincident");

  c.u_minus = 2.0;
  c.v_plus = 2.0;
  CHECK(classify_report(c)["w_minus"]["region"] == "supersonic");
}

TEST_CASE("unperturbed simulation") {
  const fs::path d = scratch("sim");
  const SimulationResult r = simulate(small_run(d));
  CHECK(r.status == RunStatus::Completed);
  CHECK(r.records.size() == 6);
  CHECK(r.stability.verdict != Verdict::Growing);
  CHECK(r.max_phi_minus_A < 1e-3);
  for (const char* f : {"initial_data.csv", "diagnostics.csv", "report.json", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(r.run_dir / f), f);
  }
  const CsvTable init = read_csv(r.run_dir / "initial_data.csv");
  CHECK(init.values("v0").front() == 1.0);
  CHECK(init.meta.contains("sigma"));
}

TEST_CASE("zero horizon gives a single record") {
  const fs::path d = scratch("zero");
  RunConfig c = small_run(d);
  c.t_end = 0.0;
  const SimulationResult r = simulate(c, {false, nullptr, {}});
  CHECK(r.records.size() == 1);
  CHECK(r.steps == 0);
}

TEST_CASE("identical configs give identical diagnostics") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const SimulationResult ra = simulate(small_run(a));
  const SimulationResult rb = simulate(small_run(b));
  CHECK(slurp(ra.run_dir / "diagnostics.csv") == slurp(rb.run_dir / "diagnostics.csv"));
}

TEST_CASE("sweeps need two values") {
  RunConfig c = small_run(scratch("sweep"));
  CHECK_THROWS_AS(sweep(c, "beta", {3.0}, 1, false), ConfigError);
  CHECK_THROWS_AS(sweep(c, "height", {3.0, 4.0}, 1, false), ConfigError);
}

TEST_CASE("imported initial data") {
  const fs::path d = scratch("import");
  CsvTable t;
  t.columns = {"xi", "v", "u"};
  for (int j = 0; j <= 10; ++j) t.rows.push_back({0.5 * j, 1.0, 0.5});
  write_csv(d / "ok.csv", t);
  const ImportedData in = read_initial_data_csv(d / "ok.csv");
  CHECK(in.xi.size() == 11);
  t.rows[3][0] = 1.6;
  write_csv(d / "bad.csv", t);
  CHECK_THROWS_AS(read_initial_data_csv(d / "bad.csv"), ConfigError);
}
