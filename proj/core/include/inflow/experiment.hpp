#pragma once

// Experiment orchestration behind the command-line tool: profile reports,
// state classification, single simulations with their artifacts, sweeps.

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inflow/config.hpp"
#include "inflow/diagnostics.hpp"
#include "inflow/errors.hpp"
#include "inflow/inflow_solver.hpp"
#include "inflow/perturbation.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kMembershipTol = 1e-6;

/// An error tagged with the pipeline stage it came from; keeps the kind.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// 0 ok, 2 config, 3 construction, 4 blow-up, 5 timeout.
int exit_code(ErrorKind kind) noexcept;

/// Builds the profile for the configured states; wraps failures as stage "profile".
std::shared_ptr<const ShockProfile> build_profile(const RunConfig& c);

/// c_+-, delta, s, R-H residuals, monotonicity, ODE residual and tail fits.
nlohmann::json profile_summary(const ShockProfile& p);

/// Regions of both states, curve membership of w_+ and the sonic point.
nlohmann::json classify_report(const RunConfig& c);

/// beta + (s - s_-) t_end + 40 / min(c_-, c_+) + perturbation support,
/// enlarged so the support ends before support_fraction * L.
double auto_domain_length(const RunConfig& c, const ShockProfile& p, double beta);

struct SimulateOptions {
  bool write_files = true;
  std::shared_ptr<const ShockProfile> profile;  // reused when given
  std::function<void(const std::string&)> log;
};

struct SimulationResult {
  RunStatus status = RunStatus::Completed;
  std::filesystem::path run_dir;
  PerturbationSetup setup;
  std::vector<DiagnosticsRecord> records;
  StabilityReport stability;
  EnergyReport energy;
  std::vector<BoundIntegral> bounds;
  double max_phi_minus_A = 0.0;  // max over snapshots of |phi(t, 0) - A(t)|
  double final_sup_dev = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double dt_min = 0.0, dt_max = 0.0;
  double wall_seconds = 0.0;
  nlohmann::json report;
};

/// Profile, initial data, run, diagnostics; writes run_<tag>/ under
/// c.out_dir when write_files is set. Failures raise StageError naming the
/// stage; a wall-clock timeout returns status TimedOut with partial results.
SimulationResult simulate(const RunConfig& c, const SimulateOptions& opts = {});

struct SweepRow {
  double value = 0.0;
  std::string tag;
  std::string status;  // completed, timeout, or the error kind
  std::string error;
  int exit_code = 0;
  double beta = 0.0;
  double final_sup_dev = 0.0;
  double E_ratio = 0.0;
  double max_phi_minus_A = 0.0;
  std::array<double, kBoundaryTraces> saturation{};
  std::string verdict;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  nlohmann::json fit;  // beta: rate fits per boundary integral; grid: error ratios
};

/// Configuration of one sweep point.
RunConfig sweep_point(const RunConfig& base, const std::string& axis, double value,
                      std::size_t index);

/// Runs every point on up to `jobs` threads. Row failures are recorded and
/// the sweep continues. Throws ConfigError for fewer than two values.
SweepResult sweep(const RunConfig& base, const std::string& axis,
                  const std::vector<double>& values, unsigned jobs, bool write_files = true,
                  const std::function<void(const std::string&)>& log = {});

}  // namespace inflow
