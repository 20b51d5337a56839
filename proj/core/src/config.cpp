#include "inflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "inflow/errors.hpp"

namespace inflow {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and rejects any it did not ask for.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("'" + name_ + "' must be an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const char* key) { return j_.at(key); }

  template <class T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("'" + name_ + "." + key + "' has the wrong type");
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    if (!has(key)) return;
    if (j_.at(key).is_string() && j_.at(key).get<std::string>() == "auto") {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown key '" + name_ + "." + k + "'");
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

json to_json(const TemplateSpec& t) {
  json j = {{"kind", to_string(t.kind)}};
  switch (t.kind) {
    case TemplateKind::Zero: break;
    case TemplateKind::Wavelet:
      j.update({{"amplitude", t.amplitude}, {"center", t.center}, {"radius", t.radius},
                {"waves", t.waves}});
      break;
    case TemplateKind::RandomModes:
      j.update({{"amplitude", t.amplitude}, {"center", t.center}, {"radius", t.radius},
                {"modes", t.modes}, {"seed", t.seed}});
      break;
    case TemplateKind::Tabulated:
      j.update({{"eta", t.eta}, {"values", t.values}});
      break;
  }
  return j;
}

TemplateSpec template_from_json(const json& j, std::uint64_t default_seed) {
  TemplateSpec t;
  t.seed = default_seed;
  if (j.is_string()) {
    t.kind = template_kind_from_string(j.get<std::string>());
    return t;
  }
  Section s(j, "template");
  std::string kind = "wavelet";
  s.get("kind", kind);
  t.kind = template_kind_from_string(kind);
  s.get("amplitude", t.amplitude);
  s.get("center", t.center);
  s.get("radius", t.radius);
  s.get("waves", t.waves);
  s.get("modes", t.modes);
  s.get("seed", t.seed);
  s.get("eta", t.eta);
  s.get("values", t.values);
  s.finish();
  return t;
}

RunConfig parse_config(const json& root) {
  RunConfig c;
  Section top(root, "config");

  if (top.has("gas")) {
    Section s(top.at("gas"), "gas");
    s.get("gamma", c.gas.gamma);
    s.get("mu", c.gas.mu);
    s.finish();
  }
  if (top.has("states")) {
    Section s(top.at("states"), "states");
    s.get("v_minus", c.v_minus);
    s.get("u_minus", c.u_minus);
    s.get("v_plus", c.v_plus);
    s.get("u_plus", c.u_plus_given);
    s.finish();
  }
  if (top.has("run")) {
    Section s(top.at("run"), "run");
    s.get("t_end", c.t_end);
    s.get("snapshot_cadence", c.snapshot_cadence);
    s.get("seed", c.seed);
    s.get("wall_clock_budget", c.wall_clock_budget);
    s.get("max_retries", c.max_retries);
    s.finish();
  }
  if (top.has("exponents")) {
    Section s(top.at("exponents"), "exponents");
    s.get("l", c.exponents.l);
    s.get("alpha", c.exponents.alpha);
    s.get("kappa", c.exponents.kappa);
    s.get("h", c.exponents.h);
    if (s.has("delta")) {
      s.get("delta", c.exponents.delta);
      c.delta_from_states = false;
    }
    s.finish();
  }
  if (c.delta_from_states) c.exponents.delta = std::abs(c.v_plus - c.v_minus);

  if (top.has("perturbation")) {
    Section s(top.at("perturbation"), "perturbation");
    auto& p = c.perturbation;
    s.get("enabled", p.enabled);
    s.get("beta", p.beta);
    s.get("beta_epsilon", p.beta_epsilon);
    s.get("min_points", p.min_points);
    s.get("blend_cells", p.blend_cells);
    s.get("blend_width", p.blend_width);
    s.get("mass_layer", p.mass_layer);
    s.get("C0", p.C0);
    s.get("sigma_C", p.sigma_C);
    s.get("support_fraction", p.support_fraction);
    s.get("divergence_tol", p.divergence_tol);
    if (s.has("f")) c.f = template_from_json(s.at("f"), c.seed);
    if (s.has("g")) c.g = template_from_json(s.at("g"), c.seed + 1);
    if (s.has("initial_data")) {
      std::string path;
      s.get("initial_data", path);
      c.initial_data = path;
    }
    s.finish();
  }
  if (top.has("grid")) {
    Section s(top.at("grid"), "grid");
    if (s.has("L")) {
      const json& L = s.at("L");
      if (L.is_string()) {
        require(L.get<std::string>() == "auto", "'grid.L' must be a number or \"auto\"");
      } else {
        s.get("L", c.L);
      }
    }
    s.get("N", c.N);
    s.get("cfl", c.cfl);
    s.finish();
  }
  if (top.has("output")) {
    Section s(top.at("output"), "output");
    std::string dir;
    if (s.has("directory")) {
      s.get("directory", dir);
      c.out_dir = dir;
    }
    s.get("tag", c.tag);
    s.get("snapshot_stride", c.snapshot_stride);
    s.get("write_profile", c.write_profile);
    if (s.has("formats")) {
      std::vector<std::string> formats;
      s.get("formats", formats);
      for (const auto& f : formats) {
        require(f == "csv" || f == "json", "unsupported output format '" + f + "'");
      }
    }
    s.finish();
  }
  if (top.has("profile")) {
    Section s(top.at("profile"), "profile");
    s.get("ode_tol", c.profile.ode_tol);
    s.get("tail_tol", c.profile.tail_tol);
    s.get("sample_spacing", c.profile.sample_spacing);
    s.get("anchor", c.profile.anchor);
    s.get("transonic_tol", c.transonic_tol);
    s.finish();
  }
  if (top.has("diagnostics")) {
    Section s(top.at("diagnostics"), "diagnostics");
    s.get("tol_slope", c.stability.tol_slope);
    s.get("noise_floor", c.stability.noise_floor);
    s.finish();
  }
  if (top.has("sweep")) {
    Section s(top.at("sweep"), "sweep");
    s.get("axis", c.sweep_axis);
    s.get("values", c.sweep_values);
    s.finish();
  }
  top.finish();
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config '" + path.string() + "': " + e.what());
  }
  RunConfig c = parse_config(j);
  if (c.initial_data && c.initial_data->is_relative()) {
    c.initial_data = path.parent_path() / *c.initial_data;
  }
  return c;
}

void validate(const RunConfig& c) {
  require(c.gas.gamma >= 1.0 && std::isfinite(c.gas.gamma), "gas.gamma must be >= 1");
  require(c.gas.mu > 0.0 && std::isfinite(c.gas.mu), "gas.mu must be positive");
  require(c.v_minus > 0.0 && c.v_plus > 0.0, "states: specific volumes must be positive");
  require(std::isfinite(c.u_minus), "states.u_minus must be finite");
  require(c.N >= 2, "grid.N must be at least 2");
  require(c.cfl > 0.0 && c.cfl <= 1.0, "grid.cfl must lie in (0, 1]");
  if (c.L) require(*c.L > 0.0, "grid.L must be positive");
  require(c.t_end >= 0.0, "run.t_end must be >= 0");
  require(c.snapshot_cadence >= 0.0, "run.snapshot_cadence must be >= 0");
  require(c.max_retries >= 0, "run.max_retries must be >= 0");
  if (c.wall_clock_budget) require(*c.wall_clock_budget > 0.0, "run.wall_clock_budget must be positive");
  require(c.profile.ode_tol > 0.0 && c.profile.tail_tol > 0.0, "profile tolerances must be positive");
  require(!c.tag.empty(), "output.tag must not be empty");
  if (c.perturbation.beta) require(*c.perturbation.beta > 0.0, "perturbation.beta must be positive");
  if (c.perturbation.blend_width) {
    require(*c.perturbation.blend_width > 0.0, "perturbation.blend_width must be positive");
  }
  if (!c.delta_from_states && c.v_plus != c.v_minus) {
    const double strength = std::abs(c.v_plus - c.v_minus);
    require(std::abs(c.exponents.delta - strength) <= 1e-9 * strength,
            "exponents.delta disagrees with the shock strength |v_+ - v_-|");
  }
  const bool perturbed = c.perturbation.enabled &&
                         (c.f.kind != TemplateKind::Zero || c.g.kind != TemplateKind::Zero);
  if (perturbed) {
    const ExponentReport rep = check_exponents(c.exponents, c.gas);
    if (!rep.valid) {
      std::ostringstream os;
      os << "exponent set fails:";
      for (const auto& chk : rep.checks) {
        if (!chk.pass) os << ' ' << chk.name << " (" << chk.lhs << " vs " << chk.rhs << ')';
      }
      throw ConfigError(os.str());
    }
  }
  if (!c.sweep_axis.empty()) {
    require(c.sweep_axis == "beta" || c.sweep_axis == "delta" || c.sweep_axis == "grid",
            "sweep.axis must be beta, delta or grid");
  }
}

json to_json(const RunConfig& c) {
  const auto& p = c.perturbation;
  json j;
  j["gas"] = {{"gamma", c.gas.gamma}, {"mu", c.gas.mu}};
  j["states"] = {{"v_minus", c.v_minus}, {"u_minus", c.u_minus}, {"v_plus", c.v_plus}};
  if (c.u_plus_given) j["states"]["u_plus"] = *c.u_plus_given;
  j["exponents"] = {{"l", c.exponents.l},         {"alpha", c.exponents.alpha},
                    {"kappa", c.exponents.kappa}, {"h", c.exponents.h},
                    {"delta", c.exponents.delta}};
  j["perturbation"] = {{"enabled", p.enabled},
                       {"beta", p.beta ? json(*p.beta) : json("auto")},
                       {"beta_epsilon", p.beta_epsilon},
                       {"min_points", p.min_points},
                       {"blend_cells", p.blend_cells},
                       {"blend_width", p.blend_width ? json(*p.blend_width) : json(nullptr)},
                       {"mass_layer", p.mass_layer},
                       {"C0", p.C0},
                       {"sigma_C", p.sigma_C},
                       {"support_fraction", p.support_fraction},
                       {"divergence_tol", p.divergence_tol},
                       {"f", to_json(c.f)},
                       {"g", to_json(c.g)},
                       {"initial_data", c.initial_data ? json(c.initial_data->string())
                                                       : json(nullptr)}};
  j["grid"] = {{"L", c.L ? json(*c.L) : json("auto")}, {"N", c.N}, {"cfl", c.cfl}};
  j["run"] = {{"t_end", c.t_end},
              {"snapshot_cadence", c.snapshot_cadence},
              {"seed", c.seed},
              {"wall_clock_budget", c.wall_clock_budget ? json(*c.wall_clock_budget) : json(nullptr)},
              {"max_retries", c.max_retries}};
  j["output"] = {{"directory", c.out_dir.string()},
                 {"tag", c.tag},
                 {"snapshot_stride", c.snapshot_stride},
                 {"write_profile", c.write_profile}};
  j["profile"] = {{"ode_tol", c.profile.ode_tol},
                  {"tail_tol", c.profile.tail_tol},
                  {"sample_spacing", c.profile.sample_spacing},
                  {"anchor", c.profile.anchor ? json(*c.profile.anchor) : json(nullptr)},
                  {"transonic_tol", c.transonic_tol}};
  j["diagnostics"] = {{"tol_slope", c.stability.tol_slope},
                      {"noise_floor", c.stability.noise_floor}};
  if (!c.sweep_axis.empty()) j["sweep"] = {{"axis", c.sweep_axis}, {"values", c.sweep_values}};
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  // Output location is excluded from the hash.
  j["output"].erase("directory");
  return fnv1a_hex(j.dump());
}

}  // namespace inflow
