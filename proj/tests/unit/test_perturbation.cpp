#include <cmath>
#include <numbers>

#include <doctest.h>

#include "common.hpp"
#include "inflow/errors.hpp"
#include "inflow/grid.hpp"
#include "inflow/perturbation.hpp"

using namespace inflow;
using doctest::Approx;
using test::kGas;

namespace {

ExponentSet admissible_exponents(double kappa) {
  ExponentSet e;
  e.l = 0.0;
  e.alpha = 1.0;
  e.kappa = kappa;
  e.h = 1.0;
  e.delta = 0.1;
  return e;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Domain;
}

}  // namespace

TEST_CASE("exponent validator") {
  const ExponentReport ok = check_exponents(admissible_exponents(1.02), kGas);
  CHECK(ok.valid);
  CHECK(ok.theta == Approx(0.02).epsilon(1e-12));
  for (const auto& c : ok.checks) CHECK_MESSAGE(c.pass, c.name);

  const ExponentReport bad = check_exponents(admissible_exponents(1.5), kGas);
  CHECK_FALSE(bad.valid);
  CHECK(bad.theta == Approx(0.5).epsilon(1e-12));

  ExponentSet e = admissible_exponents(1.02);
  e.l = 0.3;  // (gamma + 2) l = 1.2
  CHECK_FALSE(check_exponents(e, kGas).valid);
  e.l = 0.25;  // exactly 1: strict inequality fails
  CHECK_FALSE(check_exponents(e, kGas).valid);

  CHECK_FALSE(check_exponents(admissible_exponents(1.02), GasParams{1.0, 1.0}).valid);
}

TEST_CASE("theta is recomputed from its definition") {
  ExponentSet e{0.01, 0.5, 0.6, 1.0, 0.2};
  CHECK(e.theta(2.0) == 0.6 + 0.01 - (0.5 - 1.5 * 0.01));
}

TEST_CASE("zero templates give a zero family") {
  const Grid grid = make_grid(10.0, 200);
  const FamilyFields f = family_phi_psi(Template{}, Template{}, admissible_exponents(1.02), grid);
  for (double x : f.phi) REQUIRE(x == 0.0);
  for (double x : f.ddpsi) REQUIRE(x == 0.0);
}

TEST_CASE("family scaling of the derivative norms") {
  TemplateSpec spec;
  spec.amplitude = 1.0;
  spec.center = 2.0;
  spec.radius = 1.0;
  spec.waves = 1.5;
  const Template f(spec);
  const ExponentSet e = admissible_exponents(1.02);
  const FamilyScales sc = family_scales(e);

  // Template norms on a fine eta grid.
  const int n = 200000;
  const double a = spec.center - spec.radius, h = 2.0 * spec.radius / n;
  double n1 = 0.0, n2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const TemplateValue t = f(a + i * h);
    n1 += w * t.df * t.df;
    n2 += w * t.ddf * t.ddf;
  }
  n1 = std::sqrt(n1 * h);
  n2 = std::sqrt(n2 * h);

  const Grid grid = make_grid(4.0 / sc.stretch, 8000);
  const FamilyFields ff = family_phi_psi(f, Template{}, e, grid);
  CHECK(l2_norm(ff.dphi, grid.dx) == Approx(std::pow(e.delta, e.alpha) * n1).epsilon(0.01));
  CHECK(l2_norm(ff.ddphi, grid.dx) == Approx(std::pow(e.delta, -e.kappa) * n2).epsilon(0.01));

  const Grid coarse = make_grid(4.0 / sc.stretch * 1000.0, 100);
  CHECK(kind_of([&] { family_phi_psi(f, Template{}, e, coarse); }) == ErrorKind::Resolution);
}

TEST_CASE("shift vanishes geometrically for unperturbed data") {
  const auto p = test::standard_profile();
  auto sigma_at = [&](double beta) {
    const Grid grid = make_grid(beta + 40.0, 4000);
    std::vector<double> v0(grid.nodes());
    for (std::size_t j = 0; j < v0.size(); ++j) v0[j] = p->V(grid.xi(j) - beta);
    return compute_sigma(v0, grid, *p, beta, FarField::Unshifted);
  };
  const double s20 = sigma_at(20.0 / p->c_minus), s40 = sigma_at(40.0 / p->c_minus);
  CHECK(std::abs(s20) < 1e-6);
  CHECK(std::abs(s40) < 1e-6 * std::abs(s20));
}

TEST_CASE("shift is linear in added mass") {
  const auto p = test::standard_profile();
  const double beta = 10.0;
  const Grid grid = make_grid(60.0, 6000);
  std::vector<double> v0(grid.nodes()), bumped(grid.nodes());
  const double m = 0.3;
  for (std::size_t j = 0; j < v0.size(); ++j) {
    const double x = grid.xi(j);
    v0[j] = p->V(x - beta);
    const double r = (x - 20.0) / 2.0;
    // (m / 2) * (1 + cos(pi r)) / 2 integrates to m over |r| < 1
    bumped[j] = v0[j] + (std::abs(r) < 1.0 ? 0.25 * m * (1.0 + std::cos(std::numbers::pi * r)) : 0.0);
  }
  const double s0 = compute_sigma(v0, grid, *p, beta, FarField::Unshifted);
  const double s1 = compute_sigma(bumped, grid, *p, beta, FarField::Unshifted);
  CHECK((s1 - s0) == Approx(m / p->delta).epsilon(1e-6));
}

TEST_CASE("boundary datum") {
  const auto p = test::standard_profile();
  const double s_minus = -p->u_minus / p->v_minus, sigma = 0.2, beta = 3.0;
  double prev = boundary_datum_A(0.0, *p, sigma, beta, s_minus);
  CHECK(prev == Approx(-p->integral_minus(sigma - beta)).epsilon(1e-12));
  CHECK(prev < 0.0);
  for (double t = 0.5; t <= 20.0; t += 0.5) {
    const double a = boundary_datum_A(t, *p, sigma, beta, s_minus);
    REQUIRE(a >= prev);
    prev = a;
  }
  CHECK(std::abs(boundary_datum_A(200.0, *p, sigma, beta, s_minus)) < 1e-30);
}

TEST_CASE("assembly without perturbation is the shifted profile") {
  const auto p = test::standard_profile();
  const Grid grid = make_grid(40.0, 400);
  const std::vector<double> zero(grid.nodes(), 0.0);
  const double sigma = 0.1, beta = 5.0, width = 1.0;
  const AssembledData d = assemble_initial_data(zero, zero, grid, *p, sigma, beta, width);
  CHECK(d.v0.front() == 1.0);
  CHECK(d.u0.front() == 0.5);
  for (std::size_t j = 0; j < grid.nodes(); ++j) {
    if (grid.xi(j) < width) continue;
    REQUIRE(d.v0[j] == p->V(grid.xi(j) + sigma - beta));
    REQUIRE(d.u0[j] == p->U(grid.xi(j) + sigma - beta));
  }
}

TEST_CASE("initial data pipeline satisfies compatibility and bounds") {
  const auto p = test::standard_profile();
  ExponentSet e = admissible_exponents(1.02);
  e.delta = p->delta;
  PerturbationOptions o;
  o.enabled = false;
  o.beta = 4.0;
  const Grid grid = make_grid(60.0, 3000);
  const PerturbationSetup s = build_initial_data(*p, e, Template{}, Template{}, grid, o);
  CHECK(s.v0.front() == 1.0);
  CHECK(s.u0.front() == 0.5);
  CHECK(s.beta >= std::abs(s.sigma));
  for (double v : s.v0) REQUIRE(v > 0.0);
}

TEST_CASE("oscillation") {
  const Grid grid = make_grid(10.0 * std::numbers::pi, 100000);
  std::vector<double> f(grid.nodes()), c(grid.nodes(), 3.0), a(grid.nodes());
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = std::sin(grid.xi(j));
    a[j] = -0.7 * grid.xi(j) + 1.0;
  }
  CHECK(oscillation(f) == Approx(2.0).epsilon(1e-6));
  CHECK(oscillation(c) == 0.0);
  CHECK(oscillation(a) == Approx(0.7 * grid.L).epsilon(1e-12));
  CHECK_THROWS_AS(oscillation(std::vector<double>{}), DomainError);
}

TEST_CASE("grid calculus") {
  CHECK_THROWS_AS(make_grid(0.0, 10), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 1), ConfigError);
  const Grid grid = make_grid(2.0, 200);
  std::vector<double> q(grid.nodes());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = grid.xi(j) * grid.xi(j);
  const auto d = derivative(q, grid.dx);
  const auto dd = second_derivative(q, grid.dx);
  for (std::size_t j = 0; j < q.size(); ++j) {
    REQUIRE(d[j] == Approx(2.0 * grid.xi(j)).epsilon(1e-10).scale(1.0));
    REQUIRE(dd[j] == Approx(2.0).epsilon(1e-8));
  }
  const auto F = cumulative_from_right(std::vector<double>(grid.nodes(), 1.0), grid.dx);
  CHECK(F.back() == 0.0);
  CHECK(F.front() == Approx(-2.0).epsilon(1e-14));
}
