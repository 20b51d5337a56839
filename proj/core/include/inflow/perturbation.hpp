#pragma once

// Initial data for the inflow problem: the large-oscillation family
// phi0(xi) = delta^((3 alpha + kappa) / 2) f(delta^(-kappa - alpha) xi) built
// from template functions, the shift sigma, the boundary datum A(t), and the
// exponent-constraint validator.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inflow/gas_model.hpp"
#include "inflow/grid.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

struct ExponentSet {
  double l = 0.0;
  double alpha = 1.0;
  double kappa = 1.02;
  double h = 1.0;
  double delta = 0.1;

  /// kappa + l - (alpha - (gamma + 1) l / 2)
  double theta(double gamma) const { return kappa + l - (alpha - 0.5 * (gamma + 1.0) * l); }
};

struct InequalityCheck {
  std::string name;
  double lhs;
  double rhs;
  bool pass;  // lhs < rhs
};

struct ExponentReport {
  std::vector<InequalityCheck> checks;
  double theta = 0.0;
  bool valid = false;
};

/// Evaluates every strict inequality of the admissible exponent region,
/// together with delta in (0, 1) and gamma > 1. Never throws.
ExponentReport check_exponents(const ExponentSet& e, const GasParams& g);

enum class TemplateKind { Zero, Wavelet, RandomModes, Tabulated };

const char* to_string(TemplateKind kind) noexcept;
TemplateKind template_kind_from_string(const std::string& name);

/// A compactly supported H^2 template in the stretched variable eta. Wavelet
/// and random-mode templates are a C-infinity bump exp(1 - 1/(1 - r^2)),
/// r = (eta - center) / radius, times a sine series in r.
struct TemplateSpec {
  TemplateKind kind = TemplateKind::Wavelet;
  double amplitude = 1.0;
  double center = 2.0;
  double radius = 1.0;
  double waves = 1.0;       // wavelet: periods of sin(pi waves r) across the support
  unsigned modes = 4;       // random-mode count
  std::uint64_t seed = 0;   // random-mode coefficients
  std::vector<double> eta;  // tabulated abscissae (strictly increasing)
  std::vector<double> values;
};

struct TemplateValue {
  double f = 0.0;
  double df = 0.0;
  double ddf = 0.0;
};

class Template {
 public:
  Template() { spec_.kind = TemplateKind::Zero; }
  explicit Template(TemplateSpec spec);

  TemplateValue operator()(double eta) const;
  bool is_zero() const { return spec_.kind == TemplateKind::Zero; }
  double support_lo() const;
  double support_hi() const;
  /// Shortest length in eta over which the template varies appreciably.
  double feature_scale() const;
  const TemplateSpec& spec() const { return spec_; }

 private:
  TemplateSpec spec_;
  std::vector<double> freq_, coef_, phase_;
  std::vector<double> second_;  // spline second derivatives for tabulated data
};

struct FamilyScales {
  double stretch;  // delta^(-kappa - alpha)
  double amp0;     // delta^((3 alpha + kappa) / 2)
  double amp1;     // delta^((alpha - kappa) / 2)
  double amp2;     // delta^(-(alpha + 3 kappa) / 2)
};

FamilyScales family_scales(const ExponentSet& e);

struct FamilyFields {
  std::vector<double> phi, dphi, ddphi;
  std::vector<double> psi, dpsi, ddpsi;
  double support_lo = 0.0;  // xi-support of the union of both templates
  double support_hi = 0.0;
};

/// Samples phi0, psi0 and their first two derivatives (analytic, not
/// differenced). Throws a resolution error when fewer than min_points nodes
/// span the template's finest feature.
FamilyFields family_phi_psi(const Template& f, const Template& g, const ExponentSet& e,
                            const Grid& grid, std::size_t min_points = 8);

enum class FarField {
  SelfConsistent,  // v0 = V(xi + sigma - beta) beyond L
  Unshifted,       // v0 = V(xi - beta) beyond L
};

/// Shift of the profile that makes the total perturbation mass vanish.
/// Trapezoid on the grid plus analytic tails; throws a divergence error if
/// v0 has not settled to v_+ at xi = L.
double compute_sigma(std::span<const double> v0, const Grid& grid, const ShockProfile& p,
                     double beta, FarField far = FarField::SelfConsistent,
                     double divergence_tol = 1e-3);

/// A(t) = -(s - s_-) int_t^inf [V(-(s - s_-) tau + sigma - beta) - v_-] dtau.
double boundary_datum_A(double t, const ShockProfile& p, double sigma, double beta,
                        double s_minus);

/// v0 = phi0' + V(. + sigma - beta), u0 = psi0' + U(. + sigma - beta), blended
/// to (v_-, u_-) over [0, blend_width).
struct AssembledData {
  std::vector<double> v0, u0;
};
AssembledData assemble_initial_data(std::span<const double> dphi, std::span<const double> dpsi,
                                    const Grid& grid, const ShockProfile& p, double sigma,
                                    double beta, double blend_width);

/// Throws an inadmissible-data error if v0 <= 0 anywhere or leaves
/// [delta^l / C0, C0 (1 + delta^-l)], or if the boundary node is not (v_-, u_-).
void check_admissible(const AssembledData& d, const ShockProfile& p, const ExponentSet& e,
                      double C0);

struct PerturbationOptions {
  bool enabled = true;
  std::optional<double> beta;      // default delta^(-1 + beta_epsilon)
  double beta_epsilon = 0.1;
  std::size_t min_points = 8;
  std::size_t blend_cells = 3;
  std::optional<double> blend_width;  // in xi; overrides blend_cells (keeps data grid-independent)
  double C0 = 10.0;                // H1 bound constant
  double sigma_C = 10.0;           // soft bound |sigma| <= sigma_C / delta
  double support_fraction = 0.8;   // template support must end before this * L
  double divergence_tol = 1e-3;
  bool mass_layer = true;          // restore the wall-truncated profile mass
};

struct PerturbationSetup {
  Grid grid;
  std::vector<double> phi0, psi0;  // antiderivatives of v0 - V, u0 - U (shifted by sigma)
  std::vector<double> v0, u0;
  double sigma = 0.0;       // shift of the assembled data
  double sigma_seed = 0.0;  // shift used to place the profile before blending
  double beta = 0.0;
  ExponentSet exponents;
  double implied_h = 0.0;   // log u_- / log delta
  double osc_v0 = 0.0;
  double phi0_at_0_minus_A0 = 0.0;
  std::vector<std::string> warnings;
};

double default_beta(double delta, double epsilon = 0.1);

/// Full pipeline: family fields, seed shift, assembly, compatibility blend,
/// authoritative shift, admissibility checks.
PerturbationSetup build_initial_data(const ShockProfile& p, const ExponentSet& e,
                                     const Template& f, const Template& g, const Grid& grid,
                                     const PerturbationOptions& opts = {});

/// Initial data supplied directly on the grid (e.g. imported from CSV); sigma
/// is recomputed from v0.
PerturbationSetup setup_from_fields(const ShockProfile& p, const ExponentSet& e,
                                    std::vector<double> v0, std::vector<double> u0,
                                    const Grid& grid, double beta,
                                    const PerturbationOptions& opts = {});

}  // namespace inflow
