#include "inflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inflow/errors.hpp"

namespace inflow {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// Phi~ as a power series in L = ln w; exact cancellation of the linear terms.
double phi_tilde_series(double L, double a) {
  double sum = 0.0;
  double Lk = L;          // L^k / k!, starting at k = 1
  double neg_a_pow = 1.0; // (-a)^(k-1)
  for (int k = 2; k < 40; ++k) {
    Lk *= L / k;
    neg_a_pow *= -a;
    sum += (1.0 - neg_a_pow) * Lk;
    // Stop on a bound of the term; single coefficients can vanish.
    if ((1.0 + std::abs(neg_a_pow)) * std::abs(Lk) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

double phi_tilde(double w, const GasParams& g) {
  require_positive(w, "phi_tilde argument");
  const double a = g.gamma - 1.0;
  const double L = std::log(w);
  if (std::abs(L) < 0.1) return phi_tilde_series(L, a);
  if (a == 0.0) return std::expm1(L) - L;
  return std::expm1(L) + std::expm1(-a * L) / a;
}

double phi_factorized(double v, double V, double power, const GasParams& g) {
  require_positive(v, "v");
  require_positive(V, "V");
  return std::pow(V, power) * phi_tilde(v / V, g);
}

double phi_potential(double v, double V, const GasParams& g) {
  require_positive(v, "v");
  require_positive(V, "V");
  return phi_factorized(v, V, 1.0 - g.gamma, g);
}

SobolevNorms sobolev_norms(std::span<const double> f, double dx) {
  SobolevNorms n;
  n.l2 = l2_norm(f, dx);
  n.d1 = l2_norm(derivative(f, dx), dx);
  n.d2 = l2_norm(second_derivative(f, dx), dx);
  n.h1 = std::hypot(n.l2, n.d1);
  n.h2 = std::sqrt(n.l2 * n.l2 + n.d1 * n.d1 + n.d2 * n.d2);
  return n;
}

AntiderivativeFields antiderivative_fields(const SimState& s) {
  const std::size_t n = s.v.size();
  AntiderivativeFields out;
  out.dphi.resize(n);
  out.dpsi.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [V, U] = s.profile->evaluate(s.profile_arg(s.grid.xi(j)));
    out.dphi[j] = s.v[j] - V;
    out.dpsi[j] = s.u[j] - U;
  }
  out.phi = cumulative_from_right(out.dphi, s.grid.dx);
  out.psi = cumulative_from_right(out.dpsi, s.grid.dx);
  const std::size_t tail = std::max<std::size_t>(2, n / 50);
  const double threshold = 1e-6 * s.profile->delta;
  for (std::size_t j = n - tail; j < n; ++j) {
    if (std::abs(out.dphi[j]) > threshold || std::abs(out.dpsi[j]) > threshold) {
      out.truncation_warning = true;
      break;
    }
  }
  return out;
}

std::array<double, kBoundaryTraces> boundary_traces(const SimState& s, double phi_at_0) {
  const ShockProfile& p = *s.profile;
  const double y0 = s.profile_arg(0.0);
  const auto [V, U] = p.evaluate(y0);
  const double dV = p.dV(y0);
  const double phi_xi = s.left.v - V;
  const double psi_xi = s.left.u - U;
  const double drift = p.s - s.s_minus;
  return {std::abs(phi_at_0),
          std::abs(phi_xi),
          std::abs(psi_xi),
          std::abs(s.s_minus * phi_xi + psi_xi),
          std::abs(drift * dV),
          std::abs(drift * p.s * dV)};
}

DiagnosticsRecord compute_record(const SimState& s) {
  const AntiderivativeFields f = antiderivative_fields(s);
  const double dx = s.grid.dx;
  const std::size_t n = s.v.size();
  DiagnosticsRecord r;
  r.t = s.t;
  r.truncation_warning = f.truncation_warning;
  r.l2_phi = l2_norm(f.phi, dx);
  r.l2_psi = l2_norm(f.psi, dx);
  r.l2_phi_xi = l2_norm(f.dphi, dx);
  r.l2_psi_xi = l2_norm(f.dpsi, dx);
  const std::vector<double> psi_xixi = derivative(f.dpsi, dx);
  r.l2_psi_xixi = l2_norm(psi_xixi, dx);

  std::vector<double> potential(n), dissipation(n);
  r.v_min = std::numeric_limits<double>::infinity();
  r.v_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double V = s.v[j] - f.dphi[j];
    potential[j] = phi_potential(s.v[j], V, s.gas);
    dissipation[j] = f.dpsi[j] * f.dpsi[j] + psi_xixi[j] * psi_xixi[j] / s.v[j];
    r.v_min = std::min(r.v_min, s.v[j]);
    r.v_max = std::max(r.v_max, s.v[j]);
    r.sup_N = std::max(r.sup_N, std::hypot(f.phi[j], f.psi[j]));
    r.sup_dev = std::max(r.sup_dev, std::hypot(f.dphi[j], f.dpsi[j]));
  }
  const double potential_integral = trapezoid(potential, dx);
  r.sqrt_phi_potential = std::sqrt(std::max(0.0, potential_integral));
  r.dissipation_rate = trapezoid(dissipation, dx);
  r.phi_at_0 = f.phi.front();
  r.A_t = boundary_datum_A(s.t, *s.profile, s.sigma, s.beta, s.s_minus);
  r.traces = boundary_traces(s, r.phi_at_0);
  r.energy_E = r.l2_phi * r.l2_phi + r.l2_psi * r.l2_psi + potential_integral +
               r.l2_psi_xi * r.l2_psi_xi;
  return r;
}

std::vector<std::string> diagnostics_columns() {
  std::vector<std::string> c = {"t",         "sup_N",     "l2_phi",   "l2_psi",
                                "l2_phi_xi", "l2_psi_xi", "l2_psi_xixi", "sqrt_phi_potential",
                                "v_min",     "v_max",     "sup_dev",  "phi_at_0",
                                "A_t"};
  for (const char* name : kBoundaryTraceNames) c.push_back(std::string("trace_") + name);
  for (const char* name : kBoundaryTraceNames) c.push_back(std::string("cum_") + name);
  for (const char* name : {"energy_E", "dissipation_rate", "dissipation_cum", "truncation_warning"}) {
    c.emplace_back(name);
  }
  return c;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
  std::vector<double> v = {r.t,         r.sup_N,     r.l2_phi,      r.l2_psi,
                           r.l2_phi_xi, r.l2_psi_xi, r.l2_psi_xixi, r.sqrt_phi_potential,
                           r.v_min,     r.v_max,     r.sup_dev,     r.phi_at_0,
                           r.A_t};
  v.insert(v.end(), r.traces.begin(), r.traces.end());
  v.insert(v.end(), r.cum_boundary.begin(), r.cum_boundary.end());
  v.push_back(r.energy_E);
  v.push_back(r.dissipation_rate);
  v.push_back(r.dissipation_cum);
  v.push_back(r.truncation_warning ? 1.0 : 0.0);
  return v;
}

DiagnosticsMonitor::Sample DiagnosticsMonitor::sample(const SimState& s) const {
  const std::size_t n = s.v.size();
  const double dx = s.grid.dx;
  std::vector<double> dphi(n), dpsi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [V, U] = s.profile->evaluate(s.profile_arg(s.grid.xi(j)));
    dphi[j] = s.v[j] - V;
    dpsi[j] = s.u[j] - U;
  }
  const double phi0 = -trapezoid(dphi, dx);
  const std::vector<double> psi_xixi = derivative(dpsi, dx);
  std::vector<double> dissipation(n);
  for (std::size_t j = 0; j < n; ++j) {
    dissipation[j] = dpsi[j] * dpsi[j] + psi_xixi[j] * psi_xixi[j] / s.v[j];
  }
  return {s.t, boundary_traces(s, phi0), trapezoid(dissipation, dx)};
}

void DiagnosticsMonitor::observe(const SimState& s) {
  if (started_ && s.t == last_.t) return;
  Sample now = sample(s);
  if (started_) {
    const double dt = now.t - last_.t;
    for (std::size_t k = 0; k < kBoundaryTraces; ++k) {
      cum_[k] += 0.5 * dt * (last_.traces[k] + now.traces[k]);
    }
    dissipation_cum_ += 0.5 * dt * (last_.dissipation + now.dissipation);
  }
  last_ = now;
  started_ = true;
}

const DiagnosticsRecord& DiagnosticsMonitor::snapshot(const SimState& s) {
  observe(s);
  DiagnosticsRecord r = compute_record(s);
  r.cum_boundary = cum_;
  r.dissipation_cum = dissipation_cum_;
  records_.push_back(r);
  return records_.back();
}

std::vector<BoundIntegral> boundary_integral_report(const DiagnosticsRecord& last,
                                                    const ShockProfile& p, double beta) {
  const double base = std::exp(-p.c_minus * beta);
  const std::array<double, kBoundaryTraces> shapes = {
      base / p.delta, base, base, base, p.delta * base, p.delta * base};
  std::vector<BoundIntegral> out;
  for (std::size_t k = 0; k < kBoundaryTraces; ++k) {
    const double value = last.cum_boundary[k];
    out.push_back({kBoundaryTraceNames[k], value, shapes[k],
                   shapes[k] > 0.0 ? value / shapes[k] : std::numeric_limits<double>::infinity()});
  }
  return out;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Decaying: return "decaying";
    case Verdict::Flat: return "flat";
    case Verdict::Growing: return "growing";
  }
  return "unknown";
}

StabilityReport stability_report(std::span<const DiagnosticsRecord> records,
                                 const ShockProfile& p, const ExponentSet& e,
                                 const StabilityOptions& opts) {
  StabilityReport rep;
  if (records.empty()) return rep;
  const double delta = p.delta;
  const double gm = p.gas.gamma;
  rep.v_min = std::numeric_limits<double>::infinity();
  rep.v_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    rep.v_min = std::min(rep.v_min, r.v_min);
    rep.v_max = std::max(rep.v_max, r.v_max);
  }
  rep.theta = e.theta(gm);
  const double upper_shape = std::pow(delta, -2.0 * rep.theta);
  const double lower_shape = gm > 1.0 ? std::pow(delta, 2.0 * rep.theta / (gm - 1.0)) : 0.0;
  rep.C2 = std::max({rep.v_max / upper_shape, lower_shape / rep.v_min, 1.0});
  rep.lower_template = lower_shape / rep.C2;
  rep.upper_template = rep.C2 * upper_shape;

  const double s_minus = -p.u_minus / p.v_minus;
  rep.transient_end = 1.0 / (p.c_minus * (p.s - s_minus));
  const double t0 = records.front().t;
  const double t_end = records.back().t;
  rep.sup_dev_initial = records.front().sup_dev;
  rep.sup_dev_final = records.back().sup_dev;
  for (const auto& r : records) {
    if (r.t - t0 >= rep.transient_end || records.size() == 1) {
      rep.sup_dev_peak = std::max(rep.sup_dev_peak, r.sup_dev);
    }
  }
  rep.reduction = rep.sup_dev_final > 0.0 ? rep.sup_dev_peak / rep.sup_dev_final
                                          : std::numeric_limits<double>::infinity();

  std::vector<double> ts, logs;
  const double t_half = t0 + 0.5 * (t_end - t0);
  for (const auto& r : records) {
    if (r.t >= t_half && r.sup_dev > 0.0) {
      ts.push_back(r.t);
      logs.push_back(std::log(r.sup_dev));
    }
  }
  rep.log_slope = slope_fit(ts, logs);
  double window_max = 0.0;
  for (const auto& r : records) window_max = std::max(window_max, r.sup_dev);
  if (window_max < opts.noise_floor * delta || std::abs(rep.log_slope) <= opts.tol_slope) {
    rep.verdict = Verdict::Flat;
  } else {
    rep.verdict = rep.log_slope < 0.0 ? Verdict::Decaying : Verdict::Growing;
  }
  return rep;
}

EnergyReport energy_series(std::span<const DiagnosticsRecord> records, const ShockProfile& p,
                           double beta) {
  EnergyReport rep;
  if (records.empty()) return rep;
  rep.E0 = records.front().energy_E;
  rep.boundary_term = std::exp(-p.c_minus * beta) / p.delta;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    rep.E_max = std::max(rep.E_max, r.energy_E);
    if (r.dissipation_cum < prev) rep.dissipation_monotone = false;
    prev = r.dissipation_cum;
  }
  rep.dissipation = records.back().dissipation_cum;
  rep.ratio = rep.E_max / (rep.E0 + rep.boundary_term);
  return rep;
}

}  // namespace inflow
