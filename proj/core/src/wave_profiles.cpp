#include "inflow/wave_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inflow/errors.hpp"
#include "inflow/ode.hpp"

namespace inflow {

// --- MonotoneTable ----------------------------------------------------------

MonotoneTable::MonotoneTable(std::vector<double> x, std::vector<double> y,
                             std::vector<double> dy, Tail left, Tail right)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)), left_(left), right_(right) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n || dy_.size() != n) {
    throw DomainError("MonotoneTable: need at least two consistent samples");
  }
  cum_left_.assign(n, 0.0);
  cum_right_.assign(n, 0.0);
  cum_left_[0] = left_.rate > 0.0 ? (y_[0] - left_.far_value) / left_.rate : 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    const double mean = 0.5 * (y_[i] + y_[i + 1]);
    const double corr = h * h * (dy_[i] - dy_[i + 1]) / 12.0;
    cum_left_[i + 1] = cum_left_[i] + h * (mean - left_.far_value) + corr;
  }
  cum_right_[n - 1] = right_.rate > 0.0 ? (right_.far_value - y_[n - 1]) / right_.rate : 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double h = x_[i + 1] - x_[i];
    const double mean = 0.5 * (y_[i] + y_[i + 1]);
    const double corr = h * h * (dy_[i] - dy_[i + 1]) / 12.0;
    cum_right_[i] = cum_right_[i + 1] + h * (right_.far_value - mean) - corr;
  }
}

std::size_t MonotoneTable::interval(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, x_.size() - 2);
}

double MonotoneTable::value(double x) const {
  if (x <= x_.front()) {
    if (left_.rate <= 0.0) return y_.front();
    return left_.far_value +
           (y_.front() - left_.far_value) * std::exp(left_.rate * (x - x_.front()));
  }
  if (x >= x_.back()) {
    if (right_.rate <= 0.0) return y_.back();
    return right_.far_value -
           (right_.far_value - y_.back()) * std::exp(-right_.rate * (x - x_.back()));
  }
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double val = (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * dy_[i] +
                     (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * dy_[i + 1];
  const auto [lo, hi] = std::minmax(y_[i], y_[i + 1]);
  return std::clamp(val, lo, hi);
}

double MonotoneTable::partial_left(std::size_t i, double x) const {
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double far = left_.far_value;
  return h * ((0.5 * t4 - t3 + t) * (y_[i] - far) +
              (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) * h * dy_[i] +
              (-0.5 * t4 + t3) * (y_[i + 1] - far) + (0.25 * t4 - t3 / 3.0) * h * dy_[i + 1]);
}

double MonotoneTable::integral_from_left(double x) const {
  if (x <= x_.front()) {
    if (left_.rate <= 0.0) return 0.0;
    return (y_.front() - left_.far_value) * std::exp(left_.rate * (x - x_.front())) /
           left_.rate;
  }
  if (x >= x_.back()) {
    const double d = x - x_.back();
    double beyond = (right_.far_value - left_.far_value) * d;
    if (right_.rate > 0.0) {
      beyond -= (right_.far_value - y_.back()) * -std::expm1(-right_.rate * d) / right_.rate;
    } else {
      beyond = (y_.back() - left_.far_value) * d;
    }
    return cum_left_.back() + beyond;
  }
  const std::size_t i = interval(x);
  return cum_left_[i] + partial_left(i, x);
}

double MonotoneTable::integral_to_right(double x) const {
  if (x >= x_.back()) {
    if (right_.rate <= 0.0) return 0.0;
    return (right_.far_value - y_.back()) * std::exp(-right_.rate * (x - x_.back())) /
           right_.rate;
  }
  if (x <= x_.front()) {
    const double d = x_.front() - x;
    double before = (right_.far_value - left_.far_value) * d;
    if (left_.rate > 0.0) {
      before -= (y_.front() - left_.far_value) * -std::expm1(-left_.rate * d) / left_.rate;
    } else {
      before = (right_.far_value - y_.front()) * d;
    }
    return cum_right_.front() + before;
  }
  const std::size_t i = interval(x);
  const double from_node =
      (right_.far_value - left_.far_value) * (x - x_[i]) - partial_left(i, x);
  return cum_right_[i] - from_node;
}

// --- shock profile ------------------------------------------------------------

double h_function(double V, double v_ref, double s, const GasParams& g) {
  return -s * s * (V - v_ref) - pressure_difference(V, v_ref, g);
}

double profile_ode_rhs(double V, double v_minus, double v_plus, double s, const GasParams& g) {
  if (!(V >= v_minus && V <= v_plus)) {
    std::ostringstream os;
    os << "profile_ode_rhs: V = " << V << " outside [" << v_minus << ", " << v_plus << "]";
    throw DomainError(os.str());
  }
  const double ref = (V - v_minus < v_plus - V) ? v_minus : v_plus;
  return V * h_function(V, ref, s, g) / (s * g.mu);
}

DecayRates decay_rates(double v_minus, double v_plus, double s, const GasParams& g) {
  const double cm = v_minus * std::abs(dpressure(v_minus, g) + s * s) / (s * g.mu);
  const double cp = v_plus * std::abs(dpressure(v_plus, g) + s * s) / (s * g.mu);
  return {cm, cp};
}

double ShockProfile::rhs(double V) const {
  // Reference the nearer end state: h vanishes there without cancellation.
  const double ref = (V - v_minus < v_plus - V) ? v_minus : v_plus;
  return V * h_function(V, ref, s, gas) / (s * gas.mu);
}

double ShockProfile::dV(double xi) const { return rhs(V(xi)); }

namespace {

double max_abs_rhs(const std::function<double(double)>& f, double a, double b) {
  double best = 0.0;
  constexpr int kProbe = 257;
  for (int k = 1; k < kProbe; ++k) {
    best = std::max(best, std::abs(f(a + (b - a) * k / kProbe)));
  }
  return best;
}

}  // namespace

ShockProfile build_shock_profile(double v_minus, double u_minus, double v_plus,
                                 const GasParams& g, const ProfileOptions& opts) {
  g.validate();
  if (!(v_minus > 0.0) || !(v_plus > 0.0)) {
    throw DomainError("build_shock_profile: end-state volumes must be positive");
  }
  if (std::abs(v_plus - v_minus) < kMinShockStrength) {
    throw DegenerateShockError("v+ equals v- (strength below 1e-12)");
  }
  if (v_plus < v_minus) {
    throw DomainError("build_shock_profile: a 2-shock needs v+ > v- (entropy condition)");
  }

  ShockProfile p;
  p.gas = g;
  p.options = opts;
  p.v_minus = v_minus;
  p.u_minus = u_minus;
  p.v_plus = v_plus;
  const RhClosure rh = rh_closure({v_minus, u_minus}, v_plus, g);
  p.s = rh.s;
  p.u_plus = rh.w_plus.u;
  p.delta = v_plus - v_minus;
  const DecayRates rates = decay_rates(v_minus, v_plus, p.s, g);
  p.c_minus = rates.c_minus;
  p.c_plus = rates.c_plus;
  p.normalization = opts.anchor.value_or(0.5 * (v_minus + v_plus));
  if (!(p.normalization > v_minus && p.normalization < v_plus)) {
    throw DomainError("build_shock_profile: anchor must lie strictly between v- and v+");
  }

  const auto f = [&p](double V) { return p.rhs(V); };
  const double width = p.delta / max_abs_rhs(f, v_minus, v_plus);
  const double scale = std::min({1.0 / p.c_minus, 1.0 / p.c_plus, width});
  const double tail_gap = opts.tail_tol * p.delta;

  ode::AdaptiveOptions ode_opts;
  ode_opts.abs_tol = opts.ode_tol * p.delta;
  ode_opts.max_step = opts.sample_spacing * scale;
  ode_opts.initial_step = ode_opts.max_step;
  const double reach = (std::log(1.0 / opts.tail_tol) + 10.0) *
                       std::max(1.0 / p.c_minus, 1.0 / p.c_plus) * 20.0;
  ode_opts.max_length = reach;
  ode_opts.max_steps = static_cast<std::size_t>(2.0 * reach / ode_opts.max_step) + 1000;

  const ode::Trajectory fwd = ode::integrate_until(
      f, 0.0, p.normalization, +1.0, [&](double V) { return v_plus - V <= tail_gap; }, ode_opts);
  const ode::Trajectory bwd = ode::integrate_until(
      f, 0.0, p.normalization, -1.0, [&](double V) { return V - v_minus <= tail_gap; }, ode_opts);

  std::vector<double> xs, Vs;
  xs.reserve(fwd.x.size() + bwd.x.size());
  Vs.reserve(xs.capacity());
  for (std::size_t k = bwd.x.size(); k-- > 1;) {
    xs.push_back(bwd.x[k]);
    Vs.push_back(bwd.y[k]);
  }
  xs.insert(xs.end(), fwd.x.begin(), fwd.x.end());
  Vs.insert(Vs.end(), fwd.y.begin(), fwd.y.end());

  for (std::size_t k = 0; k < Vs.size(); ++k) {
    if (!(Vs[k] > v_minus && Vs[k] < v_plus) || (k > 0 && !(Vs[k] > Vs[k - 1]))) {
      std::ostringstream os;
      os << "profile lost monotonicity or left (v-, v+) at xi = " << xs[k];
      throw IntegrationError(os.str());
    }
  }
  std::vector<double> dVs(Vs.size());
  std::transform(Vs.begin(), Vs.end(), dVs.begin(), f);
  p.table_ = MonotoneTable(std::move(xs), std::move(Vs), std::move(dVs),
                           {v_minus, p.c_minus}, {v_plus, p.c_plus});
  return p;
}

namespace {

double log_linear_slope(const std::vector<double>& x, const std::vector<double>& logy) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += logy[i];
    sxx += x[i] * x[i];
    sxy += x[i] * logy[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace

TailFit fit_tail_rates(const ShockProfile& p, double lo, double hi) {
  std::vector<double> lx, ly, rx, ry;
  const auto xi = p.xi_samples();
  const auto V = p.V_samples();
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double left_gap = (V[i] - p.v_minus) / p.delta;
    const double right_gap = (p.v_plus - V[i]) / p.delta;
    if (xi[i] < 0.0 && left_gap >= lo && left_gap <= hi) {
      lx.push_back(xi[i]);
      ly.push_back(std::log(left_gap));
    }
    if (xi[i] > 0.0 && right_gap >= lo && right_gap <= hi) {
      rx.push_back(xi[i]);
      ry.push_back(std::log(right_gap));
    }
  }
  if (lx.size() < 3 || rx.size() < 3) {
    throw IntegrationError("fit_tail_rates: too few tail samples in the fitting window");
  }
  return {log_linear_slope(lx, ly), -log_linear_slope(rx, ry), lx.size(), rx.size()};
}

double max_ode_residual(const ShockProfile& p) {
  const auto x = p.xi_samples();
  const auto V = p.V_samples();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    const double dfd = -h2 / (h1 * (h1 + h2)) * V[i - 1] + (h2 - h1) / (h1 * h2) * V[i] +
                       h1 / (h2 * (h1 + h2)) * V[i + 1];
    const double ref = (V[i] - p.v_minus < p.v_plus - V[i]) ? p.v_minus : p.v_plus;
    const double res = std::abs(p.s * p.gas.mu * dfd - V[i] * h_function(V[i], ref, p.s, p.gas));
    worst = std::max(worst, res);
  }
  return worst;
}

// --- boundary-layer profile -------------------------------------------------------

double BLProfile::rhs(double V) const {
  const double h = -s_minus * s_minus * (V - v_plus) - pressure_difference(V, v_plus, gas);
  return V * h / (s_minus * gas.mu);
}

BLProfile build_bl_profile(double v_minus, double u_minus, double v_plus, const GasParams& g,
                           const ProfileOptions& opts) {
  g.validate();
  const EndState w_minus{v_minus, u_minus};
  if (classify_state(w_minus, g) != FlowRegion::Subsonic) {
    throw DomainError("build_bl_profile: boundary state must be subsonic with u- > 0");
  }
  if (!(v_plus > 0.0)) throw DomainError("build_bl_profile: v+ must be positive");

  BLProfile p;
  p.gas = g;
  p.options = opts;
  p.v_minus = v_minus;
  p.u_minus = u_minus;
  p.v_plus = v_plus;
  p.u_plus = bl_line(w_minus, v_plus);
  p.s_minus = -u_minus / v_minus;

  const BlBranch branch = bl_branch(w_minus, v_plus, g);
  if (branch == BlBranch::BeyondSonic) {
    std::ostringstream os;
    os << "v+ = " << v_plus << " lies beyond the sonic point v* = "
       << sonic_intersection(w_minus, g).v << " of the BL line";
    throw Error(ErrorKind::Inconsistent, os.str());
  }
  if (branch == BlBranch::Anchor) {
    p.constant_ = true;
    return p;
  }

  const double gap = std::abs(v_plus - v_minus);
  p.rate = v_plus * (-dpressure(v_plus, g) - p.s_minus * p.s_minus) / (std::abs(p.s_minus) * g.mu);
  const auto f = [&p](double V) { return p.rhs(V); };
  const double width = gap / max_abs_rhs(f, std::min(v_minus, v_plus), std::max(v_minus, v_plus));
  const double scale = p.rate > 0.0 ? std::min(1.0 / p.rate, width) : width;

  ode::AdaptiveOptions ode_opts;
  ode_opts.abs_tol = opts.ode_tol * gap;
  ode_opts.max_step = opts.sample_spacing * scale;
  ode_opts.initial_step = ode_opts.max_step;
  ode_opts.max_length = p.rate > 0.0 ? 20.0 * (std::log(1.0 / opts.tail_tol) + 10.0) / p.rate
                                     : 1e4 * width;
  ode_opts.max_steps = static_cast<std::size_t>(2.0 * ode_opts.max_length / ode_opts.max_step) + 1000;

  ode::Trajectory traj;
  try {
    traj = ode::integrate_until(
        f, 0.0, v_minus, +1.0,
        [&](double V) { return std::abs(V - v_plus) <= opts.tail_tol * gap; }, ode_opts);
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string("boundary-layer profile did not converge to v+ ") +
                           "(algebraic decay at the sonic point?): " + e.what());
  }
  std::vector<double> dVs(traj.y.size());
  std::transform(traj.y.begin(), traj.y.end(), dVs.begin(), f);
  p.table_ = MonotoneTable(std::move(traj.x), std::move(traj.y), std::move(dVs),
                           {v_minus, 0.0}, {v_plus, p.rate});
  return p;
}

}  // namespace inflow
