#include "inflow/inflow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace inflow {

namespace {

// v^-gamma, with the common integer exponents kept off the pow() path.
struct PressureLaw {
  double gamma;
  double operator()(double v) const {
    if (gamma == 2.0) return 1.0 / (v * v);
    if (gamma == 1.0) return 1.0 / v;
    if (gamma == 3.0) return 1.0 / (v * v * v);
    return std::pow(v, -gamma);
  }
};

void impose_boundaries(SimState& s, double time) {
  s.v.front() = s.left.v;
  s.u.front() = s.left.u;
  const auto [V, U] = s.profile->evaluate(s.profile_arg(s.grid.L, time));
  s.v.back() = V;
  s.u.back() = U;
}

void check_fields(const SimState& s, double time) {
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    if (!std::isfinite(s.v[j]) || !std::isfinite(s.u[j])) {
      std::ostringstream os;
      os << "non-finite state at node " << j << ", t = " << time;
      throw BlowUpError(os.str(), time);
    }
  }
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    if (!(s.v[j] > 0.0)) {
      std::ostringstream os;
      os << "specific volume " << s.v[j] << " <= 0 at node " << j << ", t = " << time;
      throw PositivityError(os.str(), time);
    }
  }
}

}  // namespace

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::TimedOut: return "timeout";
  }
  return "unknown";
}

SimState make_state(const Grid& grid, std::vector<double> v, std::vector<double> u,
                    std::shared_ptr<const ShockProfile> profile, double sigma, double beta) {
  if (!profile) throw DomainError("make_state: missing profile");
  if (v.size() != grid.nodes() || u.size() != grid.nodes()) {
    throw DomainError("make_state: fields do not match grid");
  }
  SimState s;
  s.grid = grid;
  s.v = std::move(v);
  s.u = std::move(u);
  s.gas = profile->gas;
  s.left = {profile->v_minus, profile->u_minus};
  s.s_minus = -profile->u_minus / profile->v_minus;
  s.profile = std::move(profile);
  s.sigma = sigma;
  s.beta = beta;
  impose_boundaries(s, s.t);
  check_fields(s, s.t);
  return s;
}

std::pair<std::vector<double>, std::vector<double>> spatial_residual(const SimState& state) {
  const std::size_t n = state.v.size();
  const std::size_t N = n - 1;
  const double dx = state.grid.dx;
  const double sm = state.s_minus;
  const double mu = state.gas.mu;
  const auto& v = state.v;
  const auto& u = state.u;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(v[j] > 0.0)) {
      std::ostringstream os;
      os << "specific volume " << v[j] << " <= 0 at node " << j;
      throw PositivityError(os.str(), state.t);
    }
  }
  const PressureLaw pressure_of{state.gas.gamma};

  // Face values at j + 1/2 for j = 0..N-1.
  std::vector<double> fv(N), fu(N), visc(N), pr(n);
  for (std::size_t j = 0; j < n; ++j) pr[j] = pressure_of(v[j]);
  for (std::size_t j = 0; j < N; ++j) {
    if (sm <= 0.0) {
      // Drift carries information rightward: second-order upwind from the left.
      if (j == 0) {
        fv[j] = 0.5 * (v[0] + v[1]);
        fu[j] = 0.5 * (u[0] + u[1]);
      } else {
        fv[j] = 1.5 * v[j] - 0.5 * v[j - 1];
        fu[j] = 1.5 * u[j] - 0.5 * u[j - 1];
      }
    } else {
      if (j + 1 == N) {
        fv[j] = 0.5 * (v[j] + v[j + 1]);
        fu[j] = 0.5 * (u[j] + u[j + 1]);
      } else {
        fv[j] = 1.5 * v[j + 1] - 0.5 * v[j + 2];
        fu[j] = 1.5 * u[j + 1] - 0.5 * u[j + 2];
      }
    }
    visc[j] = mu * (u[j + 1] - u[j]) / (0.5 * dx * (v[j] + v[j + 1]));
  }

  std::vector<double> dv(n, 0.0), du(n, 0.0);
  const double inv_dx = 1.0 / dx;
  const double inv_2dx = 0.5 / dx;
  for (std::size_t j = 1; j < N; ++j) {
    dv[j] = sm * (fv[j] - fv[j - 1]) * inv_dx + (u[j + 1] - u[j - 1]) * inv_2dx;
    du[j] = sm * (fu[j] - fu[j - 1]) * inv_dx - (pr[j + 1] - pr[j - 1]) * inv_2dx +
            (visc[j] - visc[j - 1]) * inv_dx;
  }
  return {std::move(dv), std::move(du)};
}

double stable_dt(const SimState& state, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("stable_dt: cfl must lie in (0, 1]");
  double max_speed = 0.0;
  double v_min = std::numeric_limits<double>::infinity();
  for (double vj : state.v) {
    max_speed = std::max(max_speed, std::abs(state.s_minus) + char_speeds(vj, state.gas).lambda2);
    v_min = std::min(v_min, vj);
  }
  const double dx = state.grid.dx;
  const double advective = dx / max_speed;
  const double diffusive = dx * dx * v_min / (2.0 * state.gas.mu);
  return cfl * std::min(advective, diffusive);
}

SimState step(const SimState& state, double dt) {
  if (!(dt >= 0.0)) throw DomainError("step: dt must be >= 0");
  if (dt == 0.0) return state;
  const std::size_t n = state.v.size();

  const auto [k1v, k1u] = spatial_residual(state);
  SimState mid = state;
  for (std::size_t j = 0; j < n; ++j) {
    mid.v[j] += 0.5 * dt * k1v[j];
    mid.u[j] += 0.5 * dt * k1u[j];
  }
  mid.t = state.t + 0.5 * dt;
  impose_boundaries(mid, mid.t);
  check_fields(mid, mid.t);

  const auto [k2v, k2u] = spatial_residual(mid);
  SimState out = std::move(mid);
  for (std::size_t j = 0; j < n; ++j) {
    out.v[j] = state.v[j] + dt * k2v[j];
    out.u[j] = state.u[j] + dt * k2u[j];
  }
  out.t = state.t + dt;
  impose_boundaries(out, out.t);
  check_fields(out, out.t);
  return out;
}

RunResult run(SimState state, const RunOptions& opts, const RunHooks& hooks) {
  if (!(opts.t_end >= state.t)) throw DomainError("run: t_end precedes the current time");
  const auto wall_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  RunResult res;
  res.dt_min = std::numeric_limits<double>::infinity();
  const double t0 = state.t;
  std::size_t snap = 0;
  if (hooks.on_snapshot) hooks.on_snapshot(state, snap);
  ++snap;

  auto snapshot_time = [&](std::size_t k) {
    if (opts.snapshot_cadence <= 0.0) return opts.t_end;
    return std::min(t0 + static_cast<double>(k) * opts.snapshot_cadence, opts.t_end);
  };

  std::size_t next_k = 1;
  while (state.t < opts.t_end) {
    const double target = snapshot_time(next_k);
    double dt = stable_dt(state, opts.cfl);
    bool lands = false;
    if (state.t + dt >= target) {
      dt = target - state.t;
      lands = true;
    }
    SimState next;
    for (int attempt = 0;; ++attempt) {
      try {
        next = step(state, dt);
        break;
      } catch (const PositivityError& e) {
        if (attempt >= opts.max_retries) {
          throw BlowUpError(std::string("positivity lost after ") +
                                std::to_string(opts.max_retries) + " dt halvings: " + e.what(),
                            e.time());
        }
        ++res.rejected_steps;
        dt *= 0.5;
        lands = false;
      }
    }
    if (lands) next.t = target;
    state = std::move(next);
    ++res.steps;
    res.dt_min = std::min(res.dt_min, dt);
    res.dt_max = std::max(res.dt_max, dt);
    if (hooks.on_step) hooks.on_step(state, dt);
    if (lands) {
      if (hooks.on_snapshot) hooks.on_snapshot(state, snap);
      ++snap;
      ++next_k;
    }
    if (opts.wall_clock_budget && (res.steps % 32 == 0) && elapsed() > *opts.wall_clock_budget) {
      res.status = RunStatus::TimedOut;
      break;
    }
  }
  if (res.steps == 0) res.dt_min = 0.0;
  res.snapshots = snap;
  res.wall_seconds = elapsed();
  res.final_state = std::move(state);
  return res;
}

}  // namespace inflow
