#include <cmath>

#include <doctest.h>

#include "common.hpp"
#include "inflow/errors.hpp"
#include "inflow/inflow_solver.hpp"

using namespace inflow;
using doctest::Approx;

namespace {

SimState constant_state(std::size_t N, double L) {
  const auto p = test::standard_profile();
  SimState s;
  s.grid = make_grid(L, N);
  s.v.assign(s.grid.nodes(), p->v_minus);
  s.u.assign(s.grid.nodes(), p->u_minus);
  s.gas = p->gas;
  s.s_minus = -p->u_minus / p->v_minus;
  s.left = {p->v_minus, p->u_minus};
  s.profile = p;
  return s;
}

SimState profile_state(std::size_t N) {
  const auto p = test::standard_profile();
  const Grid grid = make_grid(40.0, N);
  std::vector<double> v(grid.nodes()), u(grid.nodes());
  const double beta = 20.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = p->V(grid.xi(j) - beta);
    u[j] = p->U(grid.xi(j) - beta);
  }
  return make_state(grid, v, u, p, 0.0, beta);
}

// Residual minus the exact time derivative -(s - s_-) (V', U') of the
// traveling wave.
double residual_error(std::size_t N) {
  const SimState s = profile_state(N);
  const auto [rv, ru] = spatial_residual(s);
  const double speed = s.profile->s - s.s_minus;
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < s.v.size(); ++j) {
    const double y = s.profile_arg(s.grid.xi(j));
    worst = std::max(worst, std::abs(rv[j] + speed * s.profile->dV(y)));
    worst = std::max(worst, std::abs(ru[j] + speed * s.profile->dU(y)));
  }
  return worst;
}

}  // namespace

TEST_CASE("constant state is steady") {
  const SimState s = constant_state(100, 10.0);
  const auto [rv, ru] = spatial_residual(s);
  for (std::size_t j = 0; j < rv.size(); ++j) {
    REQUIRE(rv[j] == 0.0);
    REQUIRE(ru[j] == 0.0);
  }
}

TEST_CASE("traveling wave residual converges at second order") {
  const double e1 = residual_error(800), e2 = residual_error(1600);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("stable time step") {
  // dxi = 0.01 on v in [1, 2]: min(0.01 / (0.5 + sqrt 2), 1e-4 * 1 / 2) = 5e-5
  SimState s = constant_state(1000, 10.0);
  for (std::size_t j = 0; j < s.v.size(); ++j) s.v[j] = 1.0 + double(j) / 1000.0;
  CHECK(stable_dt(s, 0.4) == Approx(0.4 * 5e-5).epsilon(1e-14));
  CHECK_THROWS_AS(stable_dt(s, 0.0), DomainError);
  CHECK_THROWS_AS(stable_dt(s, 1.5), DomainError);

  s.gas.mu = 1e12;
  CHECK(stable_dt(s, 0.4) == Approx(0.4 * 1e-4 / 2e12).epsilon(1e-12));
}

TEST_CASE("advective bound dominates for vanishing viscosity") {
  SimState s = constant_state(1000, 10.0);
  s.gas.mu = 1e-9;
  const double adv = 0.01 / (std::abs(s.s_minus) + std::sqrt(2.0));
  CHECK(stable_dt(s, 0.4) == Approx(0.4 * adv).epsilon(1e-14));
}

TEST_CASE("zero step is the identity") {
  const SimState s = profile_state(400);
  const SimState t = step(s, 0.0);
  CHECK(t.t == s.t);
  CHECK(t.v == s.v);
  CHECK(t.u == s.u);
}

TEST_CASE("run to the current time gives one snapshot") {
  const SimState s = profile_state(400);
  RunOptions o;
  o.t_end = 0.0;
  int calls = 0;
  RunHooks h;
  h.on_snapshot = [&](const SimState&, std::size_t) { ++calls; };
  const RunResult r = run(s, o, h);
  CHECK(calls == 1);
  CHECK(r.snapshots == 1);
  CHECK(r.steps == 0);
  CHECK(r.final_state.v == s.v);
}

TEST_CASE("run lands on snapshot times and keeps boundary values") {
  const SimState s = profile_state(400);
  RunOptions o;
  o.t_end = 0.5;
  o.snapshot_cadence = 0.1;
  std::vector<double> times;
  RunHooks h;
  h.on_snapshot = [&](const SimState& st, std::size_t) {
    times.push_back(st.t);
    CHECK(st.v.front() == 1.0);
    CHECK(st.u.front() == 0.5);
  };
  const RunResult r = run(s, o, h);
  REQUIRE(times.size() == 6);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == Approx(0.1 * double(i)).epsilon(1e-12));
  CHECK(r.final_state.t == 0.5);
}

TEST_CASE("nonpositive volume is a blow-up") {
  SimState s = constant_state(100, 10.0);
  s.v[50] = -0.1;
  CHECK_THROWS_AS(spatial_residual(s), PositivityError);
}
