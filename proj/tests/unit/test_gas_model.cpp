#include <cmath>

#include <doctest.h>

#include "inflow/errors.hpp"
#include "inflow/gas_model.hpp"

using namespace inflow;
using doctest::Approx;

namespace {
const GasParams g2{2.0, 1.0};
const GasParams g1{1.0, 1.0};
const EndState wm{1.0, 0.5};
}  // namespace

TEST_CASE("pressure and its derivative") {
  CHECK(pressure(1.0, g2) == 1.0);
  CHECK(pressure(2.0, g2) == Approx(0.25).epsilon(1e-15));
  CHECK(pressure(0.5, g1) == Approx(2.0).epsilon(1e-15));
  CHECK(dpressure(1.0, g2) == Approx(-2.0).epsilon(1e-15));
  CHECK(dpressure(2.0, g2) == Approx(-0.25).epsilon(1e-15));
  CHECK(dpressure(1.0, g1) == Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(pressure(0.0, g2), DomainError);
  CHECK_THROWS_AS(pressure(-1.0, g2), DomainError);
}

TEST_CASE("pressure difference is accurate near coincidence") {
  const double a = 1.0 + 1e-9, b = 1.0;
  const double exact = -2.0 * 1e-9 + 3.0 * 1e-18;  // a^-2 - 1 to second order
  CHECK(pressure_difference(a, b, g2) == Approx(exact).epsilon(1e-7));
  CHECK(pressure_difference(2.0, 1.0, g2) == Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("sound speed and characteristic speeds") {
  CHECK(sound_speed(3.7, g1) == Approx(1.0).epsilon(1e-15));
  CHECK(sound_speed(1.0, g2) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sound_speed(2.0, g2) == Approx(1.0).epsilon(1e-15));
  const auto l = char_speeds(1.0, g2);
  CHECK(l.lambda1 == Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(l.lambda2 == Approx(std::sqrt(2.0)).epsilon(1e-15));
  const auto l1 = char_speeds(1.0, g1);
  CHECK(l1.lambda1 == Approx(-1.0));
  CHECK(l1.lambda2 == Approx(1.0));
  for (double v : {0.3, 1.0, 4.0}) CHECK(char_speeds(v, g2).lambda1 < char_speeds(v, g2).lambda2);
}

TEST_CASE("flow regions") {
  CHECK(classify_state({1.0, 0.5}, g2, 0.0) == FlowRegion::Subsonic);
  CHECK(classify_state({1.0, 2.0}, g2, 0.0) == FlowRegion::Supersonic);
  CHECK(classify_state({2.0, 1.0}, g2, 0.0) == FlowRegion::Transonic);
  CHECK(classify_state({2.0, 1.0}, g2) == FlowRegion::Transonic);
}

TEST_CASE("shock speeds and Rankine-Hugoniot closure") {
  CHECK(shock_speed(1.0, 2.0, 2, g2) == Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(shock_speed(1.0, 2.0, 1, g2) == Approx(-std::sqrt(0.75)).epsilon(1e-15));
  CHECK_THROWS_AS(shock_speed(1.0, 1.0, 2, g2), DegenerateShockError);

  const RhClosure r = rh_closure(wm, 2.0, g2);
  CHECK(r.s == Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(r.w_plus.u == Approx(0.5 - std::sqrt(0.75)).epsilon(1e-15));
  CHECK(r.w_plus.v == 2.0);
  CHECK(entropy_check(wm.u, r.w_plus.u));
  const auto [e1, e2] = rh_residuals(wm, r.w_plus, r.s, g2);
  CHECK(std::abs(e1) < 1e-14);
  CHECK(std::abs(e2) < 1e-14);
}

TEST_CASE("entropy condition is strict") {
  CHECK(entropy_check(0.5, -0.366));
  CHECK_FALSE(entropy_check(1.0, 1.0));
  CHECK_FALSE(entropy_check(0.0, 1.0));
}

TEST_CASE("boundary-layer line and sonic point") {
  CHECK(bl_line(wm, 2.0) == Approx(1.0));
  CHECK(bl_line(wm, 1.0) == Approx(0.5));
  const EndState star = sonic_intersection(wm, g2);
  CHECK(star.v == Approx(2.0).epsilon(1e-12));
  CHECK(star.u == Approx(1.0).epsilon(1e-12));
  const EndState t = sonic_intersection(star, g2);
  CHECK(t.v == star.v);
  CHECK(t.u == star.u);
  CHECK_THROWS_AS(sonic_intersection({1.0, 2.0}, g2), DomainError);
}

TEST_CASE("BL branches") {
  CHECK(bl_branch(wm, 1.5, g2) == BlBranch::Expanding);
  CHECK(bl_branch(wm, 0.5, g2) == BlBranch::Compressing);
  CHECK(bl_branch(wm, 3.0, g2) == BlBranch::BeyondSonic);
  CHECK(bl_branch(wm, 1.0, g2) == BlBranch::Anchor);
}

TEST_CASE("shock and rarefaction curves") {
  CHECK(s2_curve(wm, 2.0, g2) == Approx(0.5 - std::sqrt(0.75)).epsilon(1e-14));
  CHECK(s2_curve(wm, 1.0 + 1e-12, g2) == Approx(0.5).epsilon(1e-10));
  const EndState a{1.0, 1.0};
  CHECK(r_curve(a, 1.0, 1, g2) == 1.0);
  CHECK(r_curve(a, 4.0, 1, g2) == Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
  // u = 1 - int_1^0.25 sqrt(2) v^-1.5 dv = 1 + 2 sqrt(2)
  CHECK(r_curve(a, 0.25, 2, g2) == Approx(1.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(r_curve(a, 0.5, 1, g2), DomainError);
  // gamma = 1: lambda_2 = 1/v, antiderivative log.
  CHECK(r_curve(a, 4.0, 1, g1) == Approx(1.0 + std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("gas parameter validation") {
  CHECK_THROWS_AS((GasParams{0.5, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS((GasParams{2.0, 0.0}).validate(), DomainError);
  CHECK_NOTHROW(g1.validate());
}
