#pragma once

// Run configuration: a JSON document with the sections gas, states,
// exponents, perturbation, grid, run, output, profile, diagnostics and sweep.
// Unknown keys are rejected so typos fail loudly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inflow/diagnostics.hpp"
#include "inflow/gas_model.hpp"
#include "inflow/perturbation.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

inline TemplateSpec zero_template() {
  TemplateSpec t;
  t.kind = TemplateKind::Zero;
  return t;
}

struct RunConfig {
  GasParams gas;
  double v_minus = 1.0;
  double u_minus = 0.5;
  double v_plus = 2.0;
  std::optional<double> u_plus_given;  // classify only; shock runs use the R-H value

  ExponentSet exponents;
  bool delta_from_states = true;  // exponents.delta was not given explicitly

  PerturbationOptions perturbation;
  TemplateSpec f = zero_template();
  TemplateSpec g = zero_template();
  std::optional<std::filesystem::path> initial_data;  // CSV with xi, v, u columns

  std::optional<double> L;  // nullopt: auto
  std::size_t N = 2000;
  double cfl = 0.4;

  double t_end = 1.0;
  double snapshot_cadence = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> wall_clock_budget;
  int max_retries = 10;

  std::filesystem::path out_dir = "out";
  std::string tag = "run";
  std::size_t snapshot_stride = 1;  // write every k-th snapshot CSV; 0 disables them
  bool write_profile = true;

  ProfileOptions profile;
  StabilityOptions stability;
  double transonic_tol = kDefaultTransonicTol;

  std::string sweep_axis;
  std::vector<double> sweep_values;
};

RunConfig parse_config(const nlohmann::json& j);
/// Throws ConfigError if the file is missing or malformed.
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration, every default spelled out.
nlohmann::json to_json(const RunConfig& c);

/// Checks that need no profile: positivity, ordering, exponent validity.
void validate(const RunConfig& c);

/// 64-bit FNV-1a of the compact dump of to_json(c), as 16 hex digits.
std::string config_hash(const RunConfig& c);
std::string fnv1a_hex(const std::string& bytes);

nlohmann::json to_json(const TemplateSpec& t);
TemplateSpec template_from_json(const nlohmann::json& j, std::uint64_t default_seed);

}  // namespace inflow
