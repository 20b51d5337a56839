// inflow: profiles, classification, simulations, sweeps and the acceptance
// suite for the inflow problem of the 1-D isentropic Navier-Stokes equations.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "inflow/config.hpp"
#include "inflow/errors.hpp"
#include "inflow/experiment.hpp"
#include "inflow/io.hpp"

namespace fs = std::filesystem;
using inflow::RunConfig;

namespace {

struct Globals {
  std::string config;
  std::string out;
  unsigned jobs = 0;
  bool quiet = false;
};

RunConfig load(const Globals& g) {
  if (g.config.empty()) throw inflow::ConfigError("--config PATH is required");
  RunConfig c = inflow::load_config(g.config);
  if (!g.out.empty()) c.out_dir = g.out;
  return c;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

std::string num(double x) { return inflow::format_double(x); }

int cmd_profile(const Globals& g) {
  const RunConfig c = load(g);
  const auto p = inflow::build_profile(c);
  const nlohmann::json s = inflow::profile_summary(*p);
  const fs::path csv = c.out_dir / ("profile_" + c.tag + ".csv");
  inflow::write_profile_csv(csv, *p, s);
  inflow::write_json(c.out_dir / ("profile_" + c.tag + ".json"), s);
  say(g, "s       = " + num(p->s));
  say(g, "delta   = " + num(p->delta));
  say(g, "c_minus = " + num(p->c_minus) + "  (tail fit " + num(s["tail_fit"]["c_minus"]) + ")");
  say(g, "c_plus  = " + num(p->c_plus) + "  (tail fit " + num(s["tail_fit"]["c_plus"]) + ")");
  say(g, "monotone " + std::string(s["monotone"] ? "yes" : "no") + ", inside (v-, v+) " +
             (s["inside_end_states"] ? "yes" : "no") + ", ODE residual " +
             num(s["ode_residual"]) + ", R-H residuals " + s["rh_residuals"].dump());
  say(g, "wrote " + csv.string());
  return 0;
}

int cmd_classify(const Globals& g) {
  const RunConfig c = load(g);
  const nlohmann::json r = inflow::classify_report(c);
  std::cout << r.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const Globals& g) {
  const RunConfig c = load(g);
  inflow::SimulateOptions so;
  if (!g.quiet) so.log = [](const std::string& m) { std::cout << m << '\n'; };
  const inflow::SimulationResult r = inflow::simulate(c, so);
  say(g, "wrote " + r.run_dir.string());
  if (r.status == inflow::RunStatus::TimedOut) {
    std::cerr << "timeout: wall-clock budget exceeded at t = "
              << (r.records.empty() ? 0.0 : r.records.back().t) << "; partial results written\n";
    return 5;
  }
  return 0;
}

int cmd_sweep(const Globals& g, std::string axis, std::vector<double> values) {
  const RunConfig c = load(g);
  if (axis.empty()) axis = c.sweep_axis;
  if (values.empty()) values = c.sweep_values;
  if (axis.empty()) throw inflow::ConfigError("sweep axis missing (--axis or sweep.axis)");
  std::function<void(const std::string&)> log;
  if (!g.quiet) log = [](const std::string& m) { std::cout << m << '\n'; };
  const inflow::SweepResult r = inflow::sweep(c, axis, values, g.jobs, true, log);
  if (!r.fit.is_null()) say(g, r.fit.dump(2));
  say(g, "wrote " + (c.out_dir / ("sweep_" + c.tag + ".csv")).string());
  return 0;
}

int cmd_verify(const Globals& g, const std::vector<int>& only) {
  inflow::acceptance::Options o;
  o.only = only;
  o.jobs = g.jobs;
  if (!g.quiet) o.progress = [](const std::string& m) { std::cerr << "  done " << m << '\n'; };
  const auto outcomes = inflow::acceptance::run(o);
  return inflow::acceptance::report(outcomes, std::cout) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous shock profiles and inflow-problem simulations"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--out", g.out, "Output directory (overrides output.directory)");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps and verify (0: all cores)");
  app.add_flag("--quiet", g.quiet, "Only print errors and results");

  auto* profile = app.add_subcommand("profile", "Build the shock profile and write it");
  auto* classify = app.add_subcommand("classify", "Classify the end states");
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  auto* sweep = app.add_subcommand("sweep", "Run a beta, delta or grid sweep");
  std::string axis;
  std::vector<double> values;
  sweep->add_option("--axis", axis, "beta, delta or grid")->check(CLI::IsMember({"beta", "delta", "grid"}));
  sweep->add_option("--values", values, "Axis values");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  std::vector<int> only;
  verify->add_option("--only", only, "Criteria to run (default: all)");
  for (auto* sub : {profile, classify, simulate, sweep, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*profile) return cmd_profile(g);
    if (*classify) return cmd_classify(g);
    if (*simulate) return cmd_simulate(g);
    if (*sweep) return cmd_sweep(g, axis, values);
    if (*verify) return cmd_verify(g, only);
  } catch (const inflow::Error& e) {
    std::cerr << "error (" << inflow::to_string(e.kind()) << "): " << e.what() << '\n';
    if (e.kind() == inflow::ErrorKind::Config) std::cerr << '\n' << app.help();
    return inflow::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
