#pragma once

// Thermodynamics and wave curves of the isentropic gamma-law gas in
// Lagrangian coordinates, p(v) = v^-gamma.

#include <optional>
#include <string>
#include <utility>

namespace inflow {

struct GasParams {
  double gamma = 2.0;  // adiabatic exponent
  double mu = 1.0;     // viscosity

  /// Throws DomainError unless gamma >= 1 and mu > 0.
  void validate() const;
};

/// A point (v, u) of the phase space.
struct EndState {
  double v = 1.0;  // specific volume, > 0
  double u = 0.0;  // velocity
};

enum class FlowRegion { Subsonic, Transonic, Supersonic };

const char* to_string(FlowRegion region) noexcept;

inline constexpr double kDefaultTransonicTol = 1e-9;

double pressure(double v, const GasParams& g);
double dpressure(double v, const GasParams& g);
double sound_speed(double v, const GasParams& g);

/// p(a) - p(b) without cancellation when a is close to b.
double pressure_difference(double a, double b, const GasParams& g);

struct CharSpeeds {
  double lambda1;
  double lambda2;
};
CharSpeeds char_speeds(double v, const GasParams& g);

/// Subsonic if |u| < c(v)(1 - tol), supersonic if |u| > c(v)(1 + tol),
/// transonic otherwise. Requires u > 0.
FlowRegion classify_state(const EndState& w, const GasParams& g,
                          double tol = kDefaultTransonicTol);

/// Speed of the i-shock (family 1 or 2) joining v_l to v_r.
double shock_speed(double v_l, double v_r, int family, const GasParams& g);

struct RhClosure {
  EndState w_plus;
  double s;  // 2-shock speed
};

/// Right state on the 2-shock curve through w_minus at specific volume v_plus.
RhClosure rh_closure(const EndState& w_minus, double v_plus, const GasParams& g);

/// Residuals of the two Rankine-Hugoniot relations, each scaled by its
/// largest term.
std::pair<double, double> rh_residuals(const EndState& w_minus, const EndState& w_plus,
                                       double s, const GasParams& g);

inline bool entropy_check(double u_l, double u_r) noexcept { return u_r < u_l; }

/// Boundary-layer line u = (u_- / v_-) v through w_minus.
double bl_line(const EndState& w_minus, double v);

/// Intersection of the boundary-layer line with the sonic curve |u| = c(v).
EndState sonic_intersection(const EndState& w_minus, const GasParams& g);

/// Velocity on the 2-shock curve through the anchor, for v > anchor.v.
double s2_curve(const EndState& anchor, double v, const GasParams& g);

/// Velocity on the i-rarefaction curve through the anchor; family 1 needs
/// v > anchor.v, family 2 needs v < anchor.v.
double r_curve(const EndState& anchor, double v, int family, const GasParams& g);

/// Antiderivative of lambda_2; the lambda_1 antiderivative is its negative.
double lambda2_antiderivative(double v, const GasParams& g);

enum class BlBranch { Expanding, Compressing, BeyondSonic, Anchor };

const char* to_string(BlBranch branch) noexcept;

/// Which half of the boundary-layer line a volume falls on: BL+ is
/// v_- < v <= v_*, BL- is 0 < v < v_-.
BlBranch bl_branch(const EndState& w_minus, double v, const GasParams& g);

}  // namespace inflow
