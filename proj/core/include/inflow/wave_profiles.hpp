#pragma once

// Traveling-wave profiles: the 2-viscous shock (V, U) and the boundary-layer
// solution, both obtained by adaptive integration of their scalar ODEs away
// from an anchor point, with linearized exponential tails past truncation.

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "inflow/gas_model.hpp"

namespace inflow {

struct ProfileOptions {
  double ode_tol = 1e-10;   // local error per step, relative to the strength
  double tail_tol = 1e-8;   // truncation distance to the end states, relative to the strength
  /// Step cap in units of the shortest profile length scale.
  double sample_spacing = 1e-4;
  /// Value pinned at xi = 0; defaults to the midpoint (v_- + v_+) / 2.
  std::optional<double> anchor;
};

inline constexpr double kMinShockStrength = 1e-12;

/// Samples of a monotone function y(x) with exact slopes, evaluated by cubic
/// Hermite interpolation between samples and by exponential relaxation toward
/// the far values outside. Integrals of y relative to its far values are exact
/// for the interpolant.
class MonotoneTable {
 public:
  struct Tail {
    double far_value;
    double rate;  // e-folding rate (> 0); 0 means a constant extension
  };

  MonotoneTable() = default;
  MonotoneTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                Tail left, Tail right);

  double value(double x) const;
  /// int_{-inf}^{x} (y - left.far_value); requires a decaying left tail.
  double integral_from_left(double x) const;
  /// int_{x}^{inf} (right.far_value - y).
  double integral_to_right(double x) const;

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::span<const double> dy() const { return dy_; }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::size_t interval(double x) const;
  double partial_left(std::size_t i, double x) const;

  std::vector<double> x_, y_, dy_;
  std::vector<double> cum_left_;   // int_{-inf}^{x_i} (y - left_far)
  std::vector<double> cum_right_;  // int_{x_i}^{inf} (right_far - y)
  Tail left_{0.0, 0.0}, right_{0.0, 0.0};
};

struct DecayRates {
  double c_minus;
  double c_plus;
};

/// h(V) = -s^2 (V - v_ref) - (p(V) - p(v_ref)).
double h_function(double V, double v_ref, double s, const GasParams& g);

/// dV/dxi = V h(V) / (s mu) for the 2-shock joining v_minus and v_plus.
/// Throws DomainError outside [v_minus, v_plus].
double profile_ode_rhs(double V, double v_minus, double v_plus, double s, const GasParams& g);

/// c_+- = v_+- |p'(v_+-) + s^2| / (s mu).
DecayRates decay_rates(double v_minus, double v_plus, double s, const GasParams& g);

class ShockProfile {
 public:
  GasParams gas;
  double v_minus = 0, u_minus = 0, v_plus = 0, u_plus = 0;
  double s = 0;
  double delta = 0;
  double c_minus = 0, c_plus = 0;
  double normalization = 0;  // V(0)
  ProfileOptions options;

  double V(double xi) const { return table_.value(xi); }
  double U(double xi) const { return u_minus - s * (V(xi) - v_minus); }
  /// dV/dxi from the ODE right-hand side at the interpolated V.
  double dV(double xi) const;
  double dU(double xi) const { return -s * dV(xi); }
  std::pair<double, double> evaluate(double xi) const { return {V(xi), U(xi)}; }

  /// int_{-inf}^{y} (V - v_minus).
  double integral_minus(double y) const { return table_.integral_from_left(y); }
  /// int_{y}^{inf} (v_plus - V).
  double integral_plus(double y) const { return table_.integral_to_right(y); }

  double xi_left() const { return table_.x_front(); }
  double xi_right() const { return table_.x_back(); }
  std::span<const double> xi_samples() const { return table_.x(); }
  std::span<const double> V_samples() const { return table_.y(); }
  std::span<const double> dV_samples() const { return table_.dy(); }
  std::size_t size() const { return table_.x().size(); }

  /// Right-hand side of the profile ODE without the interior check.
  double rhs(double V) const;

 private:
  friend ShockProfile build_shock_profile(double, double, double, const GasParams&,
                                          const ProfileOptions&);
  MonotoneTable table_;
};

ShockProfile build_shock_profile(double v_minus, double u_minus, double v_plus,
                                 const GasParams& g, const ProfileOptions& opts = {});

inline std::pair<double, double> evaluate_profile(const ShockProfile& p, double xi) {
  return p.evaluate(xi);
}

struct TailFit {
  double c_minus;  // fitted left rate
  double c_plus;   // fitted right rate
  std::size_t left_points;
  std::size_t right_points;
};

/// Least-squares slope of log|V - v_+-| over the sampled tails where the
/// distance lies in [lo, hi] times the strength.
TailFit fit_tail_rates(const ShockProfile& p, double lo = 1e-6, double hi = 1e-3);

/// Max over interior samples of |s mu V'_fd - V h(V)|, with V'_fd the
/// three-point centered difference on the (possibly nonuniform) samples.
double max_ode_residual(const ShockProfile& p);

class BLProfile {
 public:
  GasParams gas;
  double v_minus = 0, u_minus = 0, v_plus = 0, u_plus = 0;
  double s_minus = 0;  // boundary speed -u_minus / v_minus
  double rate = 0;     // exponential approach rate at v_plus (0 when constant)
  ProfileOptions options;

  double V(double xi) const { return constant_ ? v_minus : table_.value(std::max(xi, 0.0)); }
  double U(double xi) const { return -s_minus * V(xi); }
  std::pair<double, double> evaluate(double xi) const { return {V(xi), U(xi)}; }
  double xi_truncation() const { return constant_ ? 0.0 : table_.x_back(); }
  bool is_constant() const { return constant_; }
  std::span<const double> xi_samples() const { return table_.x(); }
  std::span<const double> V_samples() const { return table_.y(); }
  double rhs(double V) const;

 private:
  friend BLProfile build_bl_profile(double, double, double, const GasParams&,
                                    const ProfileOptions&);
  MonotoneTable table_;
  bool constant_ = false;
};

/// Boundary-layer profile with V(0) = v_minus, V(+inf) = v_plus, for a
/// subsonic boundary state and v_plus on either branch of its BL line.
BLProfile build_bl_profile(double v_minus, double u_minus, double v_plus, const GasParams& g,
                           const ProfileOptions& opts = {});

}  // namespace inflow
