#include <cmath>

#include <doctest.h>

#include "common.hpp"
#include "inflow/errors.hpp"

using namespace inflow;
using doctest::Approx;
using test::kGas;

namespace {
const double s = std::sqrt(0.75);
}

TEST_CASE("h function") {
  CHECK(h_function(1.0, 1.0, s, kGas) == 0.0);
  CHECK(std::abs(h_function(2.0, 1.0, s, kGas)) < 1e-14);
  CHECK(h_function(1.5, 1.0, s, kGas) == Approx(-0.75 * 0.5 - (1.0 / 2.25 - 1.0)).epsilon(1e-14));
  CHECK(h_function(1.5, 1.0, s, kGas) == Approx(0.180556).epsilon(1e-6));
}

TEST_CASE("profile ODE right-hand side") {
  const double h = -0.75 * 0.5 - (1.0 / 2.25 - 1.0);
  CHECK(profile_ode_rhs(1.5, 1.0, 2.0, s, kGas) == Approx(1.5 * h / s).epsilon(1e-14));
  CHECK(profile_ode_rhs(1.5, 1.0, 2.0, s, kGas) == Approx(0.312731).epsilon(1e-6));
  CHECK(std::abs(profile_ode_rhs(1.0 + 1e-12, 1.0, 2.0, s, kGas)) < 1e-11);
  CHECK_THROWS_AS(profile_ode_rhs(2.5, 1.0, 2.0, s, kGas), DomainError);
  CHECK_THROWS_AS(profile_ode_rhs(0.5, 1.0, 2.0, s, kGas), DomainError);
}

TEST_CASE("decay rates") {
  const DecayRates c = decay_rates(1.0, 2.0, s, kGas);
  CHECK(c.c_minus == Approx(1.25 / s).epsilon(1e-14));
  CHECK(c.c_minus == Approx(1.443376).epsilon(1e-6));
  CHECK(c.c_plus == Approx(1.154701).epsilon(1e-6));
}

TEST_CASE("decay rates vanish linearly with the strength") {
  auto ratio = [](double d) {
    const double sd = rh_closure({1.0, 0.5}, 1.0 + d, kGas).s;
    return decay_rates(1.0, 1.0 + d, sd, kGas).c_minus / d;
  };
  const double r1 = ratio(1e-3), r2 = ratio(5e-4);
  CHECK(std::abs(r1 / r2 - 1.0) < 0.05);
}

TEST_CASE("standard shock profile") {
  const auto p = test::standard_profile();
  CHECK(p->V(0.0) == Approx(1.5).epsilon(1e-12));
  CHECK(p->normalization == Approx(1.5).epsilon(1e-12));
  CHECK(p->s == Approx(s).epsilon(1e-15));
  const auto V = p->V_samples();
  for (std::size_t i = 1; i < V.size(); ++i) REQUIRE(V[i] > V[i - 1]);
  for (double v : V) REQUIRE((v > 1.0 && v < 2.0));
  const auto [V0, U0] = evaluate_profile(*p, 0.0);
  CHECK(V0 == Approx(1.5).epsilon(1e-12));
  CHECK(U0 == Approx(0.5 - s * 0.5).epsilon(1e-12));
  CHECK(std::abs(p->V(p->xi_right() + 100.0) - 2.0) <= p->options.tail_tol);
  CHECK(std::abs(p->V(p->xi_left() - 100.0) - 1.0) <= p->options.tail_tol);
  CHECK(max_ode_residual(*p) < 10.0 * p->options.ode_tol);
}

TEST_CASE("tail fits recover the analytic rates") {
  const auto p = test::standard_profile();
  const TailFit f = fit_tail_rates(*p);
  CHECK(f.c_minus == Approx(p->c_minus).epsilon(0.05));
  CHECK(f.c_plus == Approx(p->c_plus).epsilon(0.05));
}

TEST_CASE("profile integrals agree with quadrature of the interpolant") {
  const auto p = test::standard_profile();
  // int_{-10}^{0} (V - v-) by a fine trapezoid rule plus the exact left tail.
  const int n = 200000;
  const double a = -10.0, h = 10.0 / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * (p->V(a + i * h) - 1.0);
  }
  sum *= h;
  CHECK(p->integral_minus(0.0) - p->integral_minus(a) == Approx(sum).epsilon(1e-8));
}

TEST_CASE("degenerate and inconsistent shock requests") {
  CHECK_THROWS_AS(build_shock_profile(1.0, 0.5, 1.0, kGas), DegenerateShockError);
  CHECK_THROWS_AS(build_shock_profile(1.0, 0.5, 0.5, kGas), Error);
}

TEST_CASE("boundary-layer profile") {
  const BLProfile b = build_bl_profile(1.0, 0.5, 1.5, kGas);
  CHECK(b.V(0.0) == 1.0);
  const auto V = b.V_samples();
  for (std::size_t i = 1; i < V.size(); ++i) REQUIRE(V[i] > V[i - 1]);
  CHECK(std::abs(b.V(b.xi_truncation()) - 1.5) <= 1e-6);
  CHECK(b.U(0.0) == Approx(0.5));

  const BLProfile c = build_bl_profile(1.0, 0.5, 1.0, kGas);
  CHECK(c.is_constant());
  CHECK(c.V(3.0) == 1.0);

  const BLProfile d = build_bl_profile(1.0, 0.5, 0.7, kGas);
  for (std::size_t i = 1; i < d.V_samples().size(); ++i) REQUIRE(d.V_samples()[i] < d.V_samples()[i - 1]);
  CHECK_THROWS_AS(build_bl_profile(1.0, 0.5, 2.5, kGas), Error);
}
