#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "common.hpp"
#include "inflow/diagnostics.hpp"
#include "inflow/errors.hpp"

using namespace inflow;
using doctest::Approx;
using test::kGas;

TEST_CASE("potential function") {
  CHECK(phi_potential(1.3, 1.3, kGas) == 0.0);
  CHECK(phi_potential(2.0, 1.0, kGas) == Approx(0.5).epsilon(1e-15));
  CHECK(phi_tilde(2.0, kGas) == Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(phi_potential(0.0, 1.0, kGas), DomainError);
  CHECK_THROWS_AS(phi_potential(1.0, -1.0, kGas), DomainError);
  // gamma = 1: Phi~(w) = w - 1 - ln w
  CHECK(phi_tilde(3.0, GasParams{1.0, 1.0}) == Approx(2.0 - std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("potential is nonnegative and factorizes with V^(1 - gamma)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (double gamma : {1.4, 2.0, 3.0}) {
    const GasParams g{gamma, 1.0};
    for (int i = 0; i < 500; ++i) {
      const double v = d(rng), V = d(rng);
      const double phi = phi_potential(v, V, g);
      REQUIRE(phi > 0.0);
      REQUIRE(phi == Approx(phi_factorized(v, V, 1.0 - gamma, g)).epsilon(1e-11));
    }
  }
}

TEST_CASE("potential near coincidence is second order") {
  // Phi ~ -p'(V) (v - V)^2 / 2
  const double V = 1.5, e = 1e-5;
  CHECK(phi_potential(V + e, V, kGas) == Approx(-dpressure(V, kGas) * e * e / 2).epsilon(1e-4));
}

TEST_CASE("Sobolev norms") {
  const double L = 8.0;
  const Grid grid = make_grid(L, 4000);
  const std::vector<double> c(grid.nodes(), 2.5);
  const SobolevNorms nc = sobolev_norms(c, grid.dx);
  CHECK(nc.l2 == Approx(2.5 * std::sqrt(L)).epsilon(1e-12));
  CHECK(nc.d1 == Approx(0.0).scale(1.0));

  const double k = 2.0 * std::numbers::pi * 10.0 / L;
  std::vector<double> f(grid.nodes());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sin(k * grid.xi(j));
  const SobolevNorms ns = sobolev_norms(f, grid.dx);
  CHECK(ns.d1 / ns.l2 == Approx(k).epsilon(0.01));
  CHECK(ns.d2 / ns.d1 == Approx(k).epsilon(0.01));
  CHECK(ns.h1 == Approx(std::sqrt(ns.l2 * ns.l2 + ns.d1 * ns.d1)).epsilon(1e-12));
}

TEST_CASE("antiderivatives of the unperturbed state vanish") {
  const auto p = test::standard_profile();
  const Grid grid = make_grid(40.0, 800);
  std::vector<double> v(grid.nodes()), u(grid.nodes());
  const double sigma = 0.3, beta = 15.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = p->V(grid.xi(j) + sigma - beta);
    u[j] = p->U(grid.xi(j) + sigma - beta);
  }
  SimState s;
  s.grid = grid;
  s.v = v;
  s.u = u;
  s.gas = p->gas;
  s.s_minus = -p->u_minus / p->v_minus;
  s.left = {p->v_minus, p->u_minus};
  s.profile = p;
  s.sigma = sigma;
  s.beta = beta;
  const AntiderivativeFields a = antiderivative_fields(s);
  for (double x : a.phi) REQUIRE(x == 0.0);
  for (double x : a.psi) REQUIRE(x == 0.0);
  CHECK_FALSE(a.truncation_warning);

  DiagnosticsMonitor m;
  const DiagnosticsRecord& r = m.snapshot(s);
  for (double x : r.cum_boundary) CHECK(x == 0.0);
  CHECK(r.dissipation_cum == 0.0);
  CHECK(r.sup_dev == 0.0);
  CHECK(r.v_min == Approx(p->V(sigma - beta)));
}

TEST_CASE("diagnostics columns match record values") {
  CHECK(diagnostics_columns().size() == record_values(DiagnosticsRecord{}).size());
}
