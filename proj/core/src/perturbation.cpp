#include "inflow/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "inflow/errors.hpp"

namespace inflow {

ExponentReport check_exponents(const ExponentSet& e, const GasParams& g) {
  const double gm = g.gamma;
  const double reduced = e.alpha - 0.5 * (gm + 1.0) * e.l;  // alpha - (gamma + 1) l / 2
  ExponentReport r;
  r.theta = e.theta(gm);
  auto add = [&r](std::string name, double lhs, double rhs) {
    r.checks.push_back({std::move(name), lhs, rhs, lhs < rhs});
  };
  add("0 < delta", 0.0, e.delta);
  add("delta < 1", e.delta, 1.0);
  add("1 < gamma", 1.0, gm);
  add("0 <= l", -e.l, std::numeric_limits<double>::min());
  add("(gamma+2) l < 1", (gm + 2.0) * e.l, 1.0);
  add("(6 gamma+4) l < alpha", (6.0 * gm + 4.0) * e.l, e.alpha);
  add("alpha < kappa", e.alpha, e.kappa);
  add("(gamma+2) l / 2 < h", 0.5 * (gm + 2.0) * e.l, e.h);
  add("h < 7/4 (alpha - (gamma+1) l / 2)", e.h, 1.75 * reduced);
  add("0 < theta", 0.0, r.theta);
  add("theta < (gamma-1) / (4 (gamma^2+3 gamma-2)) (alpha - (gamma+1) l / 2)", r.theta,
      (gm - 1.0) / (4.0 * (gm * gm + 3.0 * gm - 2.0)) * reduced);
  add("theta < (gamma-1) / (gamma^2+gamma+2)", r.theta, (gm - 1.0) / (gm * gm + gm + 2.0));
  add("theta < (gamma-1) / gamma^2 h", r.theta, (gm - 1.0) / (gm * gm) * e.h);
  r.valid = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.pass; });
  return r;
}

const char* to_string(TemplateKind kind) noexcept {
  switch (kind) {
    case TemplateKind::Zero: return "zero";
    case TemplateKind::Wavelet: return "wavelet";
    case TemplateKind::RandomModes: return "random";
    case TemplateKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

TemplateKind template_kind_from_string(const std::string& name) {
  for (auto k : {TemplateKind::Zero, TemplateKind::Wavelet, TemplateKind::RandomModes,
                 TemplateKind::Tabulated}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown template kind '" + name +
                    "' (expected zero, wavelet, random or tabulated)");
}

Template::Template(TemplateSpec spec) : spec_(std::move(spec)) {
  switch (spec_.kind) {
    case TemplateKind::Zero:
      break;
    case TemplateKind::Wavelet:
    case TemplateKind::RandomModes:
      if (!(spec_.radius > 0.0) || !std::isfinite(spec_.amplitude)) {
        throw ConfigError("template needs radius > 0 and a finite amplitude");
      }
      if (spec_.kind == TemplateKind::Wavelet) {
        freq_ = {spec_.waves};
        coef_ = {1.0};
        phase_ = {0.0};
      } else {
        if (spec_.modes == 0) throw ConfigError("random template needs at least one mode");
        std::mt19937_64 rng(spec_.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (unsigned m = 1; m <= spec_.modes; ++m) {
          freq_.push_back(m);
          coef_.push_back(unit(rng) / m);
          phase_.push_back(std::numbers::pi * (1.0 + unit(rng)));
        }
      }
      break;
    case TemplateKind::Tabulated: {
      const auto& x = spec_.eta;
      const auto& y = spec_.values;
      const std::size_t n = x.size();
      if (n < 4 || y.size() != n) throw ConfigError("tabulated template needs >= 4 (eta, f) pairs");
      for (std::size_t i = 1; i < n; ++i) {
        if (!(x[i] > x[i - 1])) throw ConfigError("tabulated template eta must increase");
      }
      const double scale = std::max(1.0, *std::max_element(y.begin(), y.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      }));
      if (std::abs(y.front()) > 1e-12 * scale || std::abs(y.back()) > 1e-12 * scale) {
        throw ConfigError("tabulated template must vanish at both ends");
      }
      // Clamped cubic spline with zero end slopes, so f extends by zero as C^1.
      std::vector<double> a(n), b(n), c(n), d(n);
      b[0] = (x[1] - x[0]) / 3.0;
      c[0] = (x[1] - x[0]) / 6.0;
      d[0] = (y[1] - y[0]) / (x[1] - x[0]);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        a[i] = h0 / 6.0;
        b[i] = (h0 + h1) / 3.0;
        c[i] = h1 / 6.0;
        d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
      }
      const double hl = x[n - 1] - x[n - 2];
      a[n - 1] = hl / 6.0;
      b[n - 1] = hl / 3.0;
      d[n - 1] = -(y[n - 1] - y[n - 2]) / hl;
      for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
      }
      second_.assign(n, 0.0);
      second_[n - 1] = d[n - 1] / b[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) second_[i] = (d[i] - c[i] * second_[i + 1]) / b[i];
      break;
    }
  }
}

TemplateValue Template::operator()(double eta) const {
  if (spec_.kind == TemplateKind::Zero) return {};
  if (spec_.kind == TemplateKind::Tabulated) {
    const auto& x = spec_.eta;
    const auto& y = spec_.values;
    if (eta <= x.front() || eta >= x.back()) return {};
    const auto it = std::upper_bound(x.begin(), x.end(), eta);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double A = (x[i + 1] - eta) / h, B = (eta - x[i]) / h;
    const double M0 = second_[i], M1 = second_[i + 1];
    return {A * y[i] + B * y[i + 1] + ((A * A * A - A) * M0 + (B * B * B - B) * M1) * h * h / 6.0,
            (y[i + 1] - y[i]) / h + (-(3 * A * A - 1) * M0 + (3 * B * B - 1) * M1) * h / 6.0,
            A * M0 + B * M1};
  }
  const double R = spec_.radius;
  const double r = (eta - spec_.center) / R;
  const double q = 1.0 - r * r;
  if (q <= 0.0 || 1.0 / q > 700.0) return {};
  const double bump = std::exp(1.0 - 1.0 / q);
  const double bump1 = -2.0 * r * bump / (q * q);
  const double bump2 = bump * (-2.0 / (q * q) - 8.0 * r * r / (q * q * q) + 4.0 * r * r / (q * q * q * q));
  double S = 0, S1 = 0, S2 = 0;
  for (std::size_t m = 0; m < freq_.size(); ++m) {
    const double k = std::numbers::pi * freq_[m];
    const double arg = k * r + phase_[m];
    S += coef_[m] * std::sin(arg);
    S1 += coef_[m] * k * std::cos(arg);
    S2 -= coef_[m] * k * k * std::sin(arg);
  }
  const double a = spec_.amplitude;
  return {a * bump * S, a / R * (bump1 * S + bump * S1),
          a / (R * R) * (bump2 * S + 2.0 * bump1 * S1 + bump * S2)};
}

double Template::support_lo() const {
  switch (spec_.kind) {
    case TemplateKind::Zero: return 0.0;
    case TemplateKind::Tabulated: return spec_.eta.front();
    default: return spec_.center - spec_.radius;
  }
}

double Template::support_hi() const {
  switch (spec_.kind) {
    case TemplateKind::Zero: return 0.0;
    case TemplateKind::Tabulated: return spec_.eta.back();
    default: return spec_.center + spec_.radius;
  }
}

double Template::feature_scale() const {
  switch (spec_.kind) {
    case TemplateKind::Zero: return std::numeric_limits<double>::infinity();
    case TemplateKind::Wavelet: return spec_.radius / std::max(1.0, spec_.waves);
    case TemplateKind::RandomModes: return spec_.radius / std::max(1.0, double(spec_.modes));
    case TemplateKind::Tabulated:
      // Four table intervals per feature.
      return 4.0 * (spec_.eta.back() - spec_.eta.front()) / double(spec_.eta.size() - 1);
  }
  return 0.0;
}

FamilyScales family_scales(const ExponentSet& e) {
  const double d = e.delta;
  return {std::pow(d, -e.kappa - e.alpha), std::pow(d, 0.5 * (3.0 * e.alpha + e.kappa)),
          std::pow(d, 0.5 * (e.alpha - e.kappa)), std::pow(d, -0.5 * (e.alpha + 3.0 * e.kappa))};
}

FamilyFields family_phi_psi(const Template& f, const Template& g, const ExponentSet& e,
                            const Grid& grid, std::size_t min_points) {
  if (!(e.delta > 0.0 && e.delta < 1.0)) throw DomainError("family needs delta in (0, 1)");
  const FamilyScales sc = family_scales(e);
  const std::size_t n = grid.nodes();
  FamilyFields out;
  for (auto* v : {&out.phi, &out.dphi, &out.ddphi, &out.psi, &out.dpsi, &out.ddpsi}) v->assign(n, 0.0);

  bool any = false;
  for (const Template* t : {&f, &g}) {
    if (t->is_zero()) continue;
    const double feature = t->feature_scale() / sc.stretch;
    if (feature < double(min_points) * grid.dx) {
      std::ostringstream os;
      os << "grid too coarse: template feature " << feature << " in xi spans fewer than "
         << min_points << " cells of width " << grid.dx;
      throw Error(ErrorKind::Resolution, os.str());
    }
    const double lo = t->support_lo() / sc.stretch, hi = t->support_hi() / sc.stretch;
    out.support_lo = any ? std::min(out.support_lo, lo) : lo;
    out.support_hi = any ? std::max(out.support_hi, hi) : hi;
    any = true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double eta = sc.stretch * grid.xi(j);
    const TemplateValue fv = f(eta), gv = g(eta);
    out.phi[j] = sc.amp0 * fv.f;
    out.dphi[j] = sc.amp1 * fv.df;
    out.ddphi[j] = sc.amp2 * fv.ddf;
    out.psi[j] = sc.amp0 * gv.f;
    out.dpsi[j] = sc.amp1 * gv.df;
    out.ddpsi[j] = sc.amp2 * gv.ddf;
  }
  return out;
}

double compute_sigma(std::span<const double> v0, const Grid& grid, const ShockProfile& p,
                     double beta, FarField far, double divergence_tol) {
  if (v0.size() != grid.nodes()) throw DomainError("compute_sigma: field does not match grid");
  if (!(beta > 0.0)) throw DomainError("compute_sigma: beta must be positive");
  const double delta = p.delta;
  if (std::abs(v0.back() - p.v_plus) > divergence_tol * delta) {
    std::ostringstream os;
    os << "v0(L) = " << v0.back() << " has not settled to v+ = " << p.v_plus
       << "; the mass integral does not converge";
    throw Error(ErrorKind::Divergence, os.str());
  }
  std::vector<double> integrand(v0.size());
  for (std::size_t j = 0; j < v0.size(); ++j) integrand[j] = v0[j] - p.V(grid.xi(j) - beta);
  const double base = trapezoid(integrand, grid.dx) - p.integral_minus(-beta);
  double sigma = base / delta;
  if (far == FarField::Unshifted) return sigma;
  const double tail0 = p.integral_plus(grid.L - beta);
  for (int it = 0; it < 200; ++it) {
    const double next = (base + tail0 - p.integral_plus(grid.L + sigma - beta)) / delta;
    const bool done = std::abs(next - sigma) <= 1e-15 * std::max(1.0, std::abs(next));
    sigma = next;
    if (done) break;
  }
  return sigma;
}

double boundary_datum_A(double t, const ShockProfile& p, double sigma, double beta,
                        double s_minus) {
  return -p.integral_minus(-(p.s - s_minus) * t + sigma - beta);
}

AssembledData assemble_initial_data(std::span<const double> dphi, std::span<const double> dpsi,
                                    const Grid& grid, const ShockProfile& p, double sigma,
                                    double beta, double blend_width) {
  const std::size_t n = grid.nodes();
  if (dphi.size() != n || dpsi.size() != n) {
    throw DomainError("assemble_initial_data: fields do not match grid");
  }
  AssembledData d;
  d.v0.resize(n);
  d.u0.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = grid.xi(j) + sigma - beta;
    d.v0[j] = dphi[j] + p.V(y);
    d.u0[j] = dpsi[j] + p.U(y);
  }
  d.v0[0] = p.v_minus;
  d.u0[0] = p.u_minus;
  for (std::size_t j = 1; j < n && grid.xi(j) < blend_width; ++j) {
    const double r = grid.xi(j) / blend_width;
    const double chi = (1.0 - r) * (1.0 - r) * (1.0 + 2.0 * r);
    d.v0[j] = chi * p.v_minus + (1.0 - chi) * d.v0[j];
    d.u0[j] = chi * p.u_minus + (1.0 - chi) * d.u0[j];
  }
  return d;
}

void check_admissible(const AssembledData& d, const ShockProfile& p, const ExponentSet& e,
                      double C0) {
  const double lower = std::pow(e.delta, e.l) / C0;
  const double upper = C0 * (1.0 + std::pow(e.delta, -e.l));
  for (std::size_t j = 0; j < d.v0.size(); ++j) {
    if (!(d.v0[j] > 0.0)) {
      throw Error(ErrorKind::Inadmissible,
                  "initial specific volume is not positive at node " + std::to_string(j));
    }
    if (d.v0[j] < lower || d.v0[j] > upper) {
      std::ostringstream os;
      os << "v0 = " << d.v0[j] << " at node " << j << " leaves the bound band [" << lower
         << ", " << upper << "]";
      throw Error(ErrorKind::Inadmissible, os.str());
    }
  }
  if (d.v0.front() != p.v_minus || d.u0.front() != p.u_minus) {
    throw Error(ErrorKind::Inadmissible, "initial data violate boundary compatibility");
  }
}

double default_beta(double delta, double epsilon) { return std::pow(delta, -1.0 + epsilon); }

namespace {

PerturbationSetup finish_setup(const ShockProfile& p, const ExponentSet& e, AssembledData d,
                               const Grid& grid, double beta, double sigma_seed,
                               const PerturbationOptions& opts) {
  PerturbationSetup out;
  out.grid = grid;
  out.beta = beta;
  out.exponents = e;
  out.sigma_seed = sigma_seed;
  out.sigma = compute_sigma(d.v0, grid, p, beta, FarField::SelfConsistent, opts.divergence_tol);
  if (std::abs(out.sigma) > beta) {
    std::ostringstream os;
    os << "|sigma| = " << std::abs(out.sigma) << " exceeds beta = " << beta;
    throw Error(ErrorKind::Inadmissible, os.str());
  }
  if (std::abs(out.sigma) > opts.sigma_C / p.delta) {
    std::ostringstream os;
    os << "|sigma| = " << std::abs(out.sigma) << " exceeds " << opts.sigma_C << " / delta";
    out.warnings.push_back(os.str());
  }
  check_admissible(d, p, e, opts.C0);

  const std::size_t n = grid.nodes();
  std::vector<double> dv(n), du(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = grid.xi(j) + out.sigma - beta;
    dv[j] = d.v0[j] - p.V(y);
    du[j] = d.u0[j] - p.U(y);
  }
  out.phi0 = cumulative_from_right(dv, grid.dx);
  out.psi0 = cumulative_from_right(du, grid.dx);
  const double s_minus = -p.u_minus / p.v_minus;
  out.phi0_at_0_minus_A0 = out.phi0.front() - boundary_datum_A(0.0, p, out.sigma, beta, s_minus);
  out.implied_h = (p.u_minus > 0.0 && e.delta > 0.0 && e.delta != 1.0)
                      ? std::log(p.u_minus) / std::log(e.delta)
                      : std::numeric_limits<double>::quiet_NaN();
  out.osc_v0 = oscillation(d.v0);
  out.v0 = std::move(d.v0);
  out.u0 = std::move(d.u0);
  return out;
}

}  // namespace

PerturbationSetup build_initial_data(const ShockProfile& p, const ExponentSet& e,
                                     const Template& f, const Template& g, const Grid& grid,
                                     const PerturbationOptions& opts) {
  const double beta = opts.beta.value_or(default_beta(p.delta, opts.beta_epsilon));
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  const std::size_t n = grid.nodes();

  FamilyFields fields;
  if (opts.enabled && !(f.is_zero() && g.is_zero())) {
    fields = family_phi_psi(f, g, e, grid, opts.min_points);
    if (fields.support_hi >= opts.support_fraction * grid.L) {
      std::ostringstream os;
      os << "perturbation support reaches xi = " << fields.support_hi << ", beyond "
         << opts.support_fraction << " L = " << opts.support_fraction * grid.L;
      throw ConfigError(os.str());
    }
  } else {
    fields.dphi.assign(n, 0.0);
    fields.dpsi.assign(n, 0.0);
  }

  std::vector<double> seed_field(n);
  for (std::size_t j = 0; j < n; ++j) seed_field[j] = p.V(grid.xi(j) - beta) + fields.dphi[j];
  const double sigma_seed =
      compute_sigma(seed_field, grid, p, beta, FarField::Unshifted, opts.divergence_tol);
  AssembledData d =
      assemble_initial_data(fields.dphi, fields.dpsi, grid, p, sigma_seed, beta,
                            opts.blend_width.value_or(double(opts.blend_cells) * grid.dx));
  if (opts.mass_layer) {
    // The wall cuts off int_{-inf}^{sigma-beta} (V - v_-); put that mass back
    // in a layer at the wall so the conserved shift equals the placement.
    const double width = std::max(1.0 / p.c_minus, 4.0 * grid.dx);
    std::vector<double> layer(n, 0.0);
    for (std::size_t j = 1; j < n && grid.xi(j) < width; ++j) {
      const double s = std::sin(std::numbers::pi * grid.xi(j) / width);
      layer[j] = s * s;
    }
    const double norm = trapezoid(layer, grid.dx);
    for (int it = 0; it < 3; ++it) {
      const double now = compute_sigma(d.v0, grid, p, beta, FarField::SelfConsistent,
                                       opts.divergence_tol);
      const double m = p.delta * (sigma_seed - now);
      for (std::size_t j = 0; j < n; ++j) d.v0[j] += m * layer[j] / norm;
    }
  }
  return finish_setup(p, e, std::move(d), grid, beta, sigma_seed, opts);
}

PerturbationSetup setup_from_fields(const ShockProfile& p, const ExponentSet& e,
                                    std::vector<double> v0, std::vector<double> u0,
                                    const Grid& grid, double beta,
                                    const PerturbationOptions& opts) {
  if (v0.size() != grid.nodes() || u0.size() != grid.nodes()) {
    throw ConfigError("initial data do not match the grid");
  }
  AssembledData d{std::move(v0), std::move(u0)};
  const double seed = compute_sigma(d.v0, grid, p, beta, FarField::SelfConsistent, opts.divergence_tol);
  return finish_setup(p, e, std::move(d), grid, beta, seed, opts);
}

}  // namespace inflow
