#pragma once

// Per-snapshot diagnostics of a running simulation: the antiderivative
// perturbations (phi, psi), discrete norms, the potential Phi, boundary traces
// and their time integrals, density extrema, and the energy functional.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "inflow/gas_model.hpp"
#include "inflow/inflow_solver.hpp"
#include "inflow/perturbation.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

/// Phi(v, V) = p(V)(v - V) - int_V^v p. Nonnegative, zero only at v = V.
double phi_potential(double v, double V, const GasParams& g);

/// Phi~(w) = w - 1 + (w^(1-gamma) - 1) / (gamma - 1), ln-form at gamma = 1.
double phi_tilde(double w, const GasParams& g);

/// V^power Phi~(v / V). Equals phi_potential exactly when power = 1 - gamma.
double phi_factorized(double v, double V, double power, const GasParams& g);

struct SobolevNorms {
  double l2 = 0.0;
  double d1 = 0.0;  // ||f'||
  double d2 = 0.0;  // ||f''||
  double h1 = 0.0;
  double h2 = 0.0;
};

SobolevNorms sobolev_norms(std::span<const double> f, double dx);

struct AntiderivativeFields {
  std::vector<double> phi, psi;
  std::vector<double> dphi, dpsi;  // v - V, u - U at the nodes
  bool truncation_warning = false;
};

/// phi = -int_xi^L (v - V(shifted)), psi likewise, by right-to-left
/// trapezoid sums. Beyond L the state is the profile, so the tail is zero;
/// the warning flags a perturbation that has not decayed near L.
AntiderivativeFields antiderivative_fields(const SimState& s);

inline constexpr std::size_t kBoundaryTraces = 6;
inline constexpr std::array<const char*, kBoundaryTraces> kBoundaryTraceNames = {
    "phi", "phi_xi", "psi_xi", "phi_t", "phi_txi", "psi_txi"};

/// |phi|, |phi_xi|, |psi_xi|, |phi_t|, |phi_txi|, |psi_txi| at xi = 0. Only
/// phi needs the field; the rest follow from the boundary values and the
/// equations.
std::array<double, kBoundaryTraces> boundary_traces(const SimState& s, double phi_at_0);

struct DiagnosticsRecord {
  double t = 0.0;
  double sup_N = 0.0;  // sup |(phi, psi)|
  double l2_phi = 0.0, l2_psi = 0.0, l2_phi_xi = 0.0, l2_psi_xi = 0.0, l2_psi_xixi = 0.0;
  double sqrt_phi_potential = 0.0;
  double v_min = 0.0, v_max = 0.0;
  double sup_dev = 0.0;  // sup |(v - V, u - U)|
  double phi_at_0 = 0.0;
  double A_t = 0.0;
  std::array<double, kBoundaryTraces> traces{};
  std::array<double, kBoundaryTraces> cum_boundary{};
  double energy_E = 0.0;
  double dissipation_rate = 0.0;  // int (psi_xi^2 + psi_xixi^2 / v)
  double dissipation_cum = 0.0;
  bool truncation_warning = false;
};

/// Instantaneous part of the record; cumulative fields are left at zero.
DiagnosticsRecord compute_record(const SimState& s);

/// Column names of diagnostics.csv in output order.
std::vector<std::string> diagnostics_columns();
std::vector<double> record_values(const DiagnosticsRecord& r);

/// Accumulates the boundary integrals and the dissipation by the time
/// trapezoid rule over every observed state, and stores snapshot records.
class DiagnosticsMonitor {
 public:
  void observe(const SimState& s);
  const DiagnosticsRecord& snapshot(const SimState& s);
  const std::vector<DiagnosticsRecord>& records() const { return records_; }

 private:
  struct Sample {
    double t;
    std::array<double, kBoundaryTraces> traces;
    double dissipation;
  };
  Sample sample(const SimState& s) const;

  bool started_ = false;
  Sample last_{};
  std::array<double, kBoundaryTraces> cum_{};
  double dissipation_cum_ = 0.0;
  std::vector<DiagnosticsRecord> records_;
};

struct BoundIntegral {
  std::string name;
  double value = 0.0;  // saturated int_0^t |trace|
  double shape = 0.0;  // delta^k e^(-c_- beta)
  double ratio = 0.0;  // value / shape, the fitted constant
};

std::vector<BoundIntegral> boundary_integral_report(const DiagnosticsRecord& last,
                                                    const ShockProfile& p, double beta);

enum class Verdict { Decaying, Flat, Growing };
const char* to_string(Verdict v) noexcept;

struct StabilityOptions {
  double tol_slope = 1e-3;     // |log-slope| below this is flat
  double noise_floor = 1e-4;   // sup_dev below this * delta is scheme-level
};

struct StabilityReport {
  double v_min = 0.0, v_max = 0.0;
  double theta = 0.0;
  double C2 = 0.0;  // smallest constant with the bound template holding
  double lower_template = 0.0, upper_template = 0.0;
  double transient_end = 0.0;  // 1 / (c_- (s - s_-))
  double sup_dev_initial = 0.0, sup_dev_peak = 0.0, sup_dev_final = 0.0;
  double reduction = 0.0;      // peak after the transient / final
  double log_slope = 0.0;      // over the last half of the run
  Verdict verdict = Verdict::Flat;
};

StabilityReport stability_report(std::span<const DiagnosticsRecord> records,
                                 const ShockProfile& p, const ExponentSet& e,
                                 const StabilityOptions& opts = {});

struct EnergyReport {
  double E0 = 0.0;
  double E_max = 0.0;
  double boundary_term = 0.0;  // delta^-1 e^(-c_- beta)
  double ratio = 0.0;          // E_max / (E0 + boundary_term)
  double dissipation = 0.0;
  bool dissipation_monotone = true;
};

EnergyReport energy_series(std::span<const DiagnosticsRecord> records, const ShockProfile& p,
                           double beta);

}  // namespace inflow
