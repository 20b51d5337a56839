#include "inflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "inflow/io.hpp"

namespace inflow {

using nlohmann::json;

namespace {

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double support_hi_xi(const RunConfig& c) {
  if (!c.perturbation.enabled) return 0.0;
  const double stretch = family_scales(c.exponents).stretch;
  double hi = 0.0;
  for (const TemplateSpec* t : {&c.f, &c.g}) {
    if (t->kind == TemplateKind::Zero) continue;
    hi = std::max(hi, Template(*t).support_hi() / stretch);
  }
  return hi;
}

json curve_entry(const char* name, bool applicable, double u_curve, double u) {
  if (!applicable) return {{"curve", name}, {"applicable", false}};
  return {{"curve", name}, {"applicable", true}, {"u_curve", u_curve},
          {"distance", std::abs(u - u_curve)}};
}

json to_json(const StabilityReport& r) {
  return {{"v_min", r.v_min},
          {"v_max", r.v_max},
          {"theta", r.theta},
          {"C2", num(r.C2)},
          {"lower_template", num(r.lower_template)},
          {"upper_template", num(r.upper_template)},
          {"transient_end", r.transient_end},
          {"sup_dev_initial", r.sup_dev_initial},
          {"sup_dev_peak", r.sup_dev_peak},
          {"sup_dev_final", r.sup_dev_final},
          {"reduction", num(r.reduction)},
          {"log_slope", r.log_slope},
          {"verdict", to_string(r.verdict)}};
}

json to_json(const EnergyReport& r) {
  return {{"E0", r.E0},
          {"E_max", r.E_max},
          {"boundary_term", r.boundary_term},
          {"ratio", num(r.ratio)},
          {"dissipation", r.dissipation},
          {"dissipation_monotone", r.dissipation_monotone}};
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::BlowUp: return 4;
    case ErrorKind::Timeout: return 5;
    default: return 3;
  }
}

std::shared_ptr<const ShockProfile> build_profile(const RunConfig& c) {
  return staged("profile", [&] {
    return std::make_shared<const ShockProfile>(
        build_shock_profile(c.v_minus, c.u_minus, c.v_plus, c.gas, c.profile));
  });
}

json profile_summary(const ShockProfile& p) {
  const auto [rh1, rh2] = rh_residuals({p.v_minus, p.u_minus}, {p.v_plus, p.u_plus}, p.s, p.gas);
  const auto V = p.V_samples();
  bool monotone = true;
  bool inside = true;
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (i > 0 && !(V[i] > V[i - 1])) monotone = false;
    if (!(V[i] > p.v_minus && V[i] < p.v_plus)) inside = false;
  }
  const TailFit fit = fit_tail_rates(p);
  return {{"gamma", p.gas.gamma},
          {"mu", p.gas.mu},
          {"v_minus", p.v_minus},
          {"u_minus", p.u_minus},
          {"v_plus", p.v_plus},
          {"u_plus", p.u_plus},
          {"s", p.s},
          {"s_minus", -p.u_minus / p.v_minus},
          {"delta", p.delta},
          {"c_minus", p.c_minus},
          {"c_plus", p.c_plus},
          {"normalization", p.normalization},
          {"xi_left", p.xi_left()},
          {"xi_right", p.xi_right()},
          {"samples", p.size()},
          {"rh_residuals", {rh1, rh2}},
          {"monotone", monotone},
          {"inside_end_states", inside},
          {"ode_residual", max_ode_residual(p)},
          {"tail_fit", {{"c_minus", fit.c_minus}, {"c_plus", fit.c_plus},
                        {"left_points", fit.left_points}, {"right_points", fit.right_points}}},
          {"ode_tol", p.options.ode_tol},
          {"tail_tol", p.options.tail_tol},
          {"sample_spacing", p.options.sample_spacing}};
}

json classify_report(const RunConfig& c) {
  return staged("classify", [&]() -> json {
    if (!(c.u_minus > 0.0)) throw ConfigError("inflow requires u_- > 0");
    const GasParams& g = c.gas;
    const EndState wm{c.v_minus, c.u_minus};
    const double v = c.v_plus;
    const double u = c.u_plus_given ? *c.u_plus_given
                     : v == wm.v   ? wm.u
                                   : rh_closure(wm, v, g).w_plus.u;
    const EndState wp{v, u};
    auto region = [&](const EndState& w) -> json {
      if (w.u == 0.0) return nullptr;
      return to_string(classify_state({w.v, std::abs(w.u)}, g, c.transonic_tol));
    };
    json rep = {{"gamma", g.gamma},
                {"w_minus", {{"v", wm.v}, {"u", wm.u}, {"region", region(wm)}}},
                {"w_plus", {{"v", wp.v}, {"u", wp.u}, {"region", region(wp)},
                            {"u_from_rh_closure", !c.u_plus_given.has_value()}}},
                {"s_minus", -wm.u / wm.v}};
    if (wp.v == wm.v && wp.u == wm.u) {
      rep["membership"] = "anchor-coincident";
      return rep;
    }
    const bool subsonic = classify_state(wm, g, c.transonic_tol) != FlowRegion::Supersonic;
    json curves = json::array();
    curves.push_back(curve_entry("S2(w-)", v > wm.v, v > wm.v ? s2_curve(wm, v, g) : 0.0, u));
    curves.push_back(curve_entry("BL(w-)", true, bl_line(wm, v), u));
    if (subsonic) {
      const EndState star = sonic_intersection(wm, g);
      rep["sonic_point"] = {{"v", star.v}, {"u", star.u}};
      rep["bl_branch"] = to_string(bl_branch(wm, v, g));
      const bool r1 = v >= star.v;
      curves.push_back(curve_entry(r1 ? "R1(w*)" : "R2(w*)", true,
                                   v == star.v ? star.u : r_curve(star, v, r1 ? 1 : 2, g), u));
      curves.push_back(curve_entry("S2(w*)", v > star.v, v > star.v ? s2_curve(star, v, g) : 0.0, u));
    }
    std::string member = "none";
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : curves) {
      if (!e["applicable"].get<bool>()) continue;
      const double d = e["distance"].get<double>();
      if (d <= kMembershipTol * std::max(1.0, std::abs(u)) && d < best) {
        best = d;
        member = e["curve"].get<std::string>();
      }
    }
    rep["curves"] = curves;
    rep["membership"] = member;
    rep["membership_tol"] = kMembershipTol;
    return rep;
  });
}

double auto_domain_length(const RunConfig& c, const ShockProfile& p, double beta) {
  const double s_minus = -p.u_minus / p.v_minus;
  const double support = support_hi_xi(c);
  double L = beta + std::max(0.0, p.s - s_minus) * c.t_end +
             40.0 / std::min(p.c_minus, p.c_plus) + support;
  L = std::max(L, 1.05 * support / c.perturbation.support_fraction);
  return L;
}

SimulationResult simulate(const RunConfig& c, const SimulateOptions& opts) {
  auto log = [&](const std::string& m) {
    if (opts.log) opts.log(m);
  };
  staged("config", [&] { validate(c); });
  if (!(c.u_minus > 0.0)) throw StageError("config", ConfigError("inflow requires u_- > 0"));

  const auto t_profile = std::chrono::steady_clock::now();
  std::shared_ptr<const ShockProfile> profile = opts.profile ? opts.profile : build_profile(c);
  const ShockProfile& p = *profile;
  const double profile_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_profile).count();
  log("profile: s = " + format_double(p.s) + ", c- = " + format_double(p.c_minus));

  SimulationResult res;
  const PerturbationOptions& po = c.perturbation;
  const double beta = po.beta.value_or(default_beta(p.delta, po.beta_epsilon));

  res.setup = staged("initial data", [&] {
    if (c.initial_data) {
      const ImportedData d = read_initial_data_csv(*c.initial_data);
      const Grid grid = make_grid(d.xi.back(), d.xi.size() - 1);
      return setup_from_fields(p, c.exponents, d.v, d.u, grid, beta, po);
    }
    const Grid grid = make_grid(c.L.value_or(auto_domain_length(c, p, beta)), c.N);
    const Template f(c.f), g(c.g);
    return build_initial_data(p, c.exponents, f, g, grid, po);
  });
  const PerturbationSetup& setup = res.setup;
  for (const auto& w : setup.warnings) log("warning: " + w);
  log("initial data: L = " + format_double(setup.grid.L) + ", N = " +
      std::to_string(setup.grid.N) + ", sigma = " + format_double(setup.sigma) +
      ", beta = " + format_double(setup.beta));

  const std::filesystem::path dir = c.out_dir / ("run_" + c.tag);
  if (opts.write_files) {
    staged("output", [&] {
      std::filesystem::create_directories(dir);
      if (c.write_profile) write_profile_csv(dir / "profile.csv", p, profile_summary(p));
      write_initial_data_csv(dir / "initial_data.csv", setup);
    });
  }
  res.run_dir = dir;

  SimState state = staged("solver", [&] {
    return make_state(setup.grid, setup.v0, setup.u0, profile, setup.sigma, setup.beta);
  });

  DiagnosticsMonitor monitor;
  json snapshots = json::array();
  RunOptions ro;
  ro.t_end = c.t_end;
  ro.snapshot_cadence = c.snapshot_cadence;
  ro.cfl = c.cfl;
  ro.max_retries = c.max_retries;
  ro.wall_clock_budget = c.wall_clock_budget;
  RunHooks hooks;
  hooks.on_step = [&](const SimState& s, double) { monitor.observe(s); };
  hooks.on_snapshot = [&](const SimState& s, std::size_t index) {
    monitor.snapshot(s);
    json entry = {{"index", index}, {"t", s.t}};
    if (opts.write_files && c.snapshot_stride > 0 && index % c.snapshot_stride == 0) {
      const std::string name = "snap_" + std::to_string(index) + ".csv";
      write_snapshot_csv(dir / name, s);
      entry["file"] = name;
    }
    snapshots.push_back(std::move(entry));
  };

  RunResult run_result;
  std::string failure;
  ErrorKind failure_kind = ErrorKind::BlowUp;
  try {
    run_result = staged("solver", [&] { return run(state, ro, hooks); });
    res.status = run_result.status;
  } catch (const StageError& e) {
    if (!opts.write_files) throw;
    failure = e.what();
    failure_kind = e.kind();
  }

  res.records = monitor.records();
  if (!res.records.empty()) {
    res.stability = stability_report(res.records, p, c.exponents, c.stability);
    res.energy = energy_series(res.records, p, setup.beta);
    res.bounds = boundary_integral_report(res.records.back(), p, setup.beta);
    for (const auto& r : res.records) {
      res.max_phi_minus_A = std::max(res.max_phi_minus_A, std::abs(r.phi_at_0 - r.A_t));
    }
    res.final_sup_dev = res.records.back().sup_dev;
  }
  res.steps = run_result.steps;
  res.rejected_steps = run_result.rejected_steps;
  res.dt_min = run_result.dt_min;
  res.dt_max = run_result.dt_max;
  res.wall_seconds = run_result.wall_seconds;

  const ExponentReport exps = check_exponents(c.exponents, c.gas);
  json exp_checks = json::array();
  for (const auto& chk : exps.checks) {
    exp_checks.push_back({{"name", chk.name}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"pass", chk.pass}});
  }
  json bounds = json::array();
  for (const auto& b : res.bounds) {
    bounds.push_back({{"name", b.name}, {"value", b.value}, {"shape", b.shape}, {"ratio", num(b.ratio)}});
  }
  res.report = {
      {"status", failure.empty() ? to_string(res.status) : "failed"},
      {"error", failure.empty() ? json(nullptr) : json(failure)},
      {"sigma", setup.sigma},
      {"sigma_seed", setup.sigma_seed},
      {"beta", setup.beta},
      {"phi0_at_0_minus_A0", setup.phi0_at_0_minus_A0},
      {"implied_h", num(setup.implied_h)},
      {"osc_v0", setup.osc_v0},
      {"warnings", setup.warnings},
      {"exponents", {{"valid", exps.valid}, {"theta", exps.theta}, {"checks", exp_checks}}},
      {"stability", to_json(res.stability)},
      {"verdict", to_string(res.stability.verdict)},
      {"energy", to_json(res.energy)},
      {"boundary_integrals", bounds},
      {"max_abs_phi0_minus_A", res.max_phi_minus_A},
      {"final_sup_dev", res.final_sup_dev},
      {"t_final", res.records.empty() ? 0.0 : res.records.back().t},
      {"steps", res.steps},
      {"rejected_steps", res.rejected_steps},
      {"truncation_warning",
       std::any_of(res.records.begin(), res.records.end(),
                   [](const DiagnosticsRecord& r) { return r.truncation_warning; })}};

  if (opts.write_files) {
    staged("output", [&] {
      write_diagnostics_csv(dir / "diagnostics.csv", res.records);
      json report = res.report;
      report["wall_seconds"] = res.wall_seconds;
      report["profile_seconds"] = profile_seconds;
      write_json(dir / "report.json", report);
      json manifest = {
          {"version", kVersion},
          {"config", to_json(c)},
          {"config_hash", config_hash(c)},
          {"profile", profile_summary(p)},
          {"grid", {{"L", setup.grid.L}, {"N", setup.grid.N}, {"dxi", setup.grid.dx}}},
          {"time", {{"t_end", c.t_end},
                    {"steps", res.steps},
                    {"rejected_steps", res.rejected_steps},
                    {"dt_min", res.dt_min},
                    {"dt_max", res.dt_max},
                    {"status", res.report["status"]}}},
          {"scheme", {{"advection", "second-order upwind, left-biased (s_- < 0)"},
                      {"pressure_and_velocity", "centered"},
                      {"viscous", "conservative face flux mu (u_j+1 - u_j) / (dxi avg v)"},
                      {"time", "explicit midpoint RK2"},
                      {"cfl", c.cfl},
                      {"max_retries", c.max_retries},
                      {"far_field_closure", "Dirichlet to shifted profile at xi = L"},
                      {"inflow_boundary", "Dirichlet (v_-, u_-) at xi = 0"}}},
          {"tolerances", {{"ode_tol", c.profile.ode_tol},
                          {"tail_tol", c.profile.tail_tol},
                          {"sample_spacing", c.profile.sample_spacing},
                          {"transonic_tol", c.transonic_tol},
                          {"divergence_tol", po.divergence_tol},
                          {"support_fraction", po.support_fraction},
                          {"min_points", po.min_points},
                          {"C0", po.C0},
                          {"sigma_C", po.sigma_C},
                          {"blend_cells", po.blend_cells},
                          {"blend_width", po.blend_width ? json(*po.blend_width) : json(nullptr)},
                          {"mass_layer", po.mass_layer},
                          {"tol_slope", c.stability.tol_slope},
                          {"noise_floor", c.stability.noise_floor},
                          {"antiderivative_truncation_tol", 1e-6}}},
          {"snapshots", snapshots},
          {"files", {"profile.csv", "initial_data.csv", "diagnostics.csv", "report.json"}}};
      write_json(dir / "manifest.json", manifest);
    });
  }
  if (!failure.empty()) throw StageError("solver", Error(failure_kind, failure));
  log("run: " + std::string(to_string(res.status)) + ", verdict " +
      to_string(res.stability.verdict) + ", final sup_dev " + format_double(res.final_sup_dev));
  return res;
}

RunConfig sweep_point(const RunConfig& base, const std::string& axis, double value,
                      std::size_t index) {
  RunConfig c = base;
  c.sweep_axis.clear();
  c.sweep_values.clear();
  if (axis == "beta") {
    c.perturbation.beta = value;
  } else if (axis == "delta") {
    c.v_plus = c.v_minus + value;
    c.exponents.delta = value;
    c.delta_from_states = true;
  } else if (axis == "grid") {
    if (!(value >= 2.0) || value != std::floor(value)) {
      throw ConfigError("grid sweep values must be integers >= 2");
    }
    c.N = static_cast<std::size_t>(value);
  } else {
    throw ConfigError("sweep axis must be beta, delta or grid");
  }
  c.tag = base.tag + "_" + axis + std::to_string(index);
  return c;
}

SweepResult sweep(const RunConfig& base, const std::string& axis,
                  const std::vector<double>& values, unsigned jobs, bool write_files,
                  const std::function<void(const std::string&)>& log) {
  if (values.size() < 2) throw ConfigError("sweep needs >= 2 values");
  std::vector<RunConfig> points;
  for (std::size_t i = 0; i < values.size(); ++i) points.push_back(sweep_point(base, axis, values[i], i));
  for (const auto& p : points) validate(p);

  // Points sharing the states share one profile.
  std::shared_ptr<const ShockProfile> shared;
  if (axis != "delta") shared = build_profile(base);

  SweepResult out;
  out.axis = axis;
  out.rows.resize(points.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = out.rows[i];
      row.value = values[i];
      row.tag = points[i].tag;
      try {
        SimulateOptions so;
        so.write_files = write_files;
        so.profile = shared;
        const SimulationResult r = simulate(points[i], so);
        row.status = to_string(r.status);
        row.exit_code = r.status == RunStatus::TimedOut ? 5 : 0;
        row.beta = r.setup.beta;
        row.final_sup_dev = r.final_sup_dev;
        row.E_ratio = r.energy.ratio;
        row.max_phi_minus_A = r.max_phi_minus_A;
        for (std::size_t k = 0; k < kBoundaryTraces && k < r.bounds.size(); ++k) {
          row.saturation[k] = r.bounds[k].value;
        }
        row.verdict = to_string(r.stability.verdict);
      } catch (const Error& e) {
        row.status = to_string(e.kind());
        row.error = e.what();
        row.exit_code = exit_code(e.kind());
      } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
        row.exit_code = 1;
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        log(row.tag + ": " + row.status + (row.error.empty() ? "" : " (" + row.error + ")"));
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(jobs ? jobs : std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<const SweepRow*> ok;
  for (const auto& r : out.rows) {
    if (r.exit_code == 0) ok.push_back(&r);
  }
  if (axis == "beta" && ok.size() >= 2) {
    const double c_minus = shared->c_minus;
    json fits = json::array();
    for (std::size_t k = 0; k < kBoundaryTraces; ++k) {
      std::vector<double> xs, ys;
      for (const auto* r : ok) {
        if (r->saturation[k] > 0.0) {
          xs.push_back(r->beta);
          ys.push_back(std::log(r->saturation[k]));
        }
      }
      json f = {{"name", kBoundaryTraceNames[k]}};
      if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          mx += xs[i];
          my += ys[i];
        }
        mx /= double(xs.size());
        my /= double(xs.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          sxy += (xs[i] - mx) * (ys[i] - my);
          sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        const double rate = sxx > 0.0 ? -sxy / sxx : std::numeric_limits<double>::quiet_NaN();
        json ratios = json::array();
        for (std::size_t i = 1; i < xs.size(); ++i) {
          const double observed = std::exp(ys[i] - ys[i - 1]);
          const double expected = std::exp(-c_minus * (xs[i] - xs[i - 1]));
          ratios.push_back({{"observed", observed}, {"expected", expected},
                            {"relative_error", std::abs(observed / expected - 1.0)}});
        }
        f.update({{"rate", num(rate)}, {"c_minus", c_minus},
                  {"rate_relative_error", num(std::abs(rate / c_minus - 1.0))},
                  {"consecutive", ratios}});
      }
      fits.push_back(f);
    }
    out.fit = {{"axis", "beta"}, {"fits", fits}};
  } else if (axis == "grid" && ok.size() >= 2) {
    json ratios = json::array();
    for (std::size_t i = 1; i < ok.size(); ++i) {
      const double r = ok[i]->final_sup_dev > 0.0 ? ok[i - 1]->final_sup_dev / ok[i]->final_sup_dev
                                                  : std::numeric_limits<double>::quiet_NaN();
      ratios.push_back({{"from", ok[i - 1]->value}, {"to", ok[i]->value}, {"error_ratio", num(r)},
                        {"order", num(std::log(r) / std::log(ok[i]->value / ok[i - 1]->value))}});
    }
    out.fit = {{"axis", "grid"}, {"ratios", ratios}};
  }

  if (write_files) {
    const std::filesystem::path dir = base.out_dir;
    CsvTable t;
    t.meta = {{"axis", axis}, {"config_hash", config_hash(base)}};
    t.columns = {"value", "exit_code", "beta", "final_sup_dev", "E_ratio", "max_abs_phi0_minus_A"};
    for (const char* name : kBoundaryTraceNames) t.columns.push_back(std::string("sat_") + name);
    for (const auto& r : out.rows) {
      std::vector<double> row = {r.value, double(r.exit_code), r.beta, r.final_sup_dev, r.E_ratio,
                                 r.max_phi_minus_A};
      for (double s : r.saturation) row.push_back(s);
      t.rows.push_back(std::move(row));
    }
    write_csv(dir / ("sweep_" + base.tag + ".csv"), t);
    json rows = json::array();
    for (const auto& r : out.rows) {
      rows.push_back({{"value", r.value}, {"tag", r.tag}, {"status", r.status},
                      {"error", r.error}, {"exit_code", r.exit_code}, {"verdict", r.verdict}});
    }
    write_json(dir / ("sweep_" + base.tag + ".json"), {{"rows", rows}, {"fit", out.fit}});
  }
  return out;
}

}  // namespace inflow
