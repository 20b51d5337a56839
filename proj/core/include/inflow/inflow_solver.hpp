#pragma once

// Explicit finite-difference integrator for the inflow problem in the frame
// xi = x - s_- t:
//   v_t - s_- v_xi - u_xi = 0
//   u_t - s_- u_xi + p(v)_xi = mu (u_xi / v)_xi
// on [0, L] with (v, u) = (v_-, u_-) at xi = 0 and the shifted shock profile
// imposed at xi = L.

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "inflow/errors.hpp"
#include "inflow/gas_model.hpp"
#include "inflow/grid.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

class PositivityError : public BlowUpError {
 public:
  using BlowUpError::BlowUpError;
};

struct SimState {
  Grid grid;
  double t = 0.0;
  std::vector<double> v, u;
  GasParams gas;
  double s_minus = 0.0;
  EndState left;  // inflow values (v_-, u_-)
  std::shared_ptr<const ShockProfile> profile;
  double sigma = 0.0;
  double beta = 0.0;

  /// Argument of the profile at xi: xi - (s - s_-) t + sigma - beta.
  double profile_arg(double xi) const { return xi - (profile->s - s_minus) * t + sigma - beta; }
  double profile_arg(double xi, double time) const {
    return xi - (profile->s - s_minus) * time + sigma - beta;
  }
};

/// State initialized from fields on the grid; boundary nodes are overwritten
/// with the inflow values and the far-field closure.
SimState make_state(const Grid& grid, std::vector<double> v, std::vector<double> u,
                    std::shared_ptr<const ShockProfile> profile, double sigma, double beta);

/// Right-hand sides (dv/dt, du/dt); boundary rows are zero.
/// Throws PositivityError if some v_j <= 0.
std::pair<std::vector<double>, std::vector<double>> spatial_residual(const SimState& state);

/// cfl * min(dxi / max_j(|s_-| + lambda_2(v_j)), dxi^2 min_j v_j / (2 mu)).
double stable_dt(const SimState& state, double cfl);

/// One explicit midpoint Runge-Kutta step. Throws PositivityError when a stage
/// produces v_j <= 0 and BlowUpError on non-finite values.
SimState step(const SimState& state, double dt);

struct RunOptions {
  double t_end = 0.0;
  double snapshot_cadence = 0.0;  // <= 0: only the initial and final snapshots
  double cfl = 0.4;
  int max_retries = 10;           // dt halvings on positivity loss
  std::optional<double> wall_clock_budget;  // seconds
};

struct RunHooks {
  std::function<void(const SimState&, std::size_t index)> on_snapshot;
  /// Called after every accepted step with the step size taken.
  std::function<void(const SimState&, double dt)> on_step;
};

enum class RunStatus { Completed, TimedOut };

const char* to_string(RunStatus status) noexcept;

struct RunResult {
  RunStatus status = RunStatus::Completed;
  SimState final_state;
  std::size_t steps = 0;
  std::size_t snapshots = 0;
  std::size_t rejected_steps = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
  double wall_seconds = 0.0;
};

/// Steps to t_end, landing exactly on every snapshot time. Positivity loss
/// halves dt up to max_retries times before a BlowUpError propagates.
RunResult run(SimState state, const RunOptions& opts, const RunHooks& hooks = {});

}  // namespace inflow
