#include "inflow/gas_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inflow/errors.hpp"

namespace inflow {

namespace {

void require_positive_volume(double v, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << where << ": specific volume must be positive, got " << v;
    throw DomainError(os.str());
  }
}

void require_family(int family) {
  if (family != 1 && family != 2) {
    throw DomainError("wave family must be 1 or 2, got " + std::to_string(family));
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::Inconsistent: return "inconsistent";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Inadmissible: return "inadmissible";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Config: return "config";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::Timeout: return "timeout";
  }
  return "unknown";
}

void GasParams::validate() const {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be >= 1, got " + std::to_string(gamma));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("mu must be positive, got " + std::to_string(mu));
  }
}

const char* to_string(FlowRegion region) noexcept {
  switch (region) {
    case FlowRegion::Subsonic: return "subsonic";
    case FlowRegion::Transonic: return "transonic";
    case FlowRegion::Supersonic: return "supersonic";
  }
  return "unknown";
}

const char* to_string(BlBranch branch) noexcept {
  switch (branch) {
    case BlBranch::Expanding: return "BL+";
    case BlBranch::Compressing: return "BL-";
    case BlBranch::BeyondSonic: return "beyond-sonic";
    case BlBranch::Anchor: return "anchor";
  }
  return "unknown";
}

double pressure(double v, const GasParams& g) {
  require_positive_volume(v, "pressure");
  return std::pow(v, -g.gamma);
}

double dpressure(double v, const GasParams& g) {
  require_positive_volume(v, "dpressure");
  return -g.gamma * std::pow(v, -g.gamma - 1.0);
}

double sound_speed(double v, const GasParams& g) {
  require_positive_volume(v, "sound_speed");
  // sqrt(gamma v^(1-gamma)) rounds exactly where the product form does not.
  return std::sqrt(g.gamma * std::pow(v, 1.0 - g.gamma));
}

double pressure_difference(double a, double b, const GasParams& g) {
  require_positive_volume(a, "pressure_difference");
  require_positive_volume(b, "pressure_difference");
  return std::pow(b, -g.gamma) * std::expm1(-g.gamma * std::log1p((a - b) / b));
}

CharSpeeds char_speeds(double v, const GasParams& g) {
  const double l2 = std::sqrt(-dpressure(v, g));
  return {-l2, l2};
}

FlowRegion classify_state(const EndState& w, const GasParams& g, double tol) {
  require_positive_volume(w.v, "classify_state");
  if (!(w.u > 0.0)) {
    throw DomainError("classify_state: flow regions are defined for u > 0");
  }
  if (!(tol >= 0.0)) throw DomainError("classify_state: tolerance must be >= 0");
  const double c = sound_speed(w.v, g);
  const double speed = std::abs(w.u);
  if (speed < c * (1.0 - tol)) return FlowRegion::Subsonic;
  if (speed > c * (1.0 + tol)) return FlowRegion::Supersonic;
  return FlowRegion::Transonic;
}

double shock_speed(double v_l, double v_r, int family, const GasParams& g) {
  require_positive_volume(v_l, "shock_speed");
  require_positive_volume(v_r, "shock_speed");
  require_family(family);
  if (v_l == v_r) {
    throw DegenerateShockError("v_l == v_r = " + std::to_string(v_l));
  }
  const double radicand = pressure_difference(v_r, v_l, g) / (v_l - v_r);
  const double magnitude = std::sqrt(radicand);
  return family == 1 ? -magnitude : magnitude;
}

RhClosure rh_closure(const EndState& w_minus, double v_plus, const GasParams& g) {
  const double s = shock_speed(w_minus.v, v_plus, 2, g);
  return {{v_plus, w_minus.u - s * (v_plus - w_minus.v)}, s};
}

std::pair<double, double> rh_residuals(const EndState& w_minus, const EndState& w_plus,
                                       double s, const GasParams& g) {
  auto scaled = [](double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
  };
  const double first = scaled(s * (w_plus.v - w_minus.v), w_minus.u - w_plus.u);
  const double second = scaled(s * (w_plus.u - w_minus.u),
                               pressure_difference(w_plus.v, w_minus.v, g));
  return {first, second};
}

double bl_line(const EndState& w_minus, double v) {
  require_positive_volume(w_minus.v, "bl_line");
  require_positive_volume(v, "bl_line");
  return w_minus.u / w_minus.v * v;
}

EndState sonic_intersection(const EndState& w_minus, const GasParams& g) {
  const FlowRegion region = classify_state(w_minus, g);
  if (region == FlowRegion::Supersonic) {
    throw DomainError("sonic_intersection: boundary state is supersonic");
  }
  if (region == FlowRegion::Transonic) return w_minus;
  const double slope = w_minus.u / w_minus.v;
  const double v_star = std::pow(std::sqrt(g.gamma) / slope, 2.0 / (g.gamma + 1.0));
  return {v_star, slope * v_star};
}

double s2_curve(const EndState& anchor, double v, const GasParams& g) {
  require_positive_volume(anchor.v, "s2_curve");
  if (!(v > anchor.v)) {
    throw DomainError("s2_curve: defined for v > anchor volume");
  }
  return anchor.u - shock_speed(anchor.v, v, 2, g) * (v - anchor.v);
}

double lambda2_antiderivative(double v, const GasParams& g) {
  require_positive_volume(v, "lambda2_antiderivative");
  if (g.gamma == 1.0) return std::log(v);
  const double a = g.gamma - 1.0;
  return -2.0 * std::sqrt(g.gamma) / a * std::pow(v, -0.5 * a);
}

double r_curve(const EndState& anchor, double v, int family, const GasParams& g) {
  require_positive_volume(anchor.v, "r_curve");
  require_positive_volume(v, "r_curve");
  require_family(family);
  if (family == 1 && v < anchor.v) throw DomainError("r_curve: R1 needs v >= anchor volume");
  if (family == 2 && v > anchor.v) throw DomainError("r_curve: R2 needs v <= anchor volume");
  if (v == anchor.v) return anchor.u;
  const double integral_l2 = lambda2_antiderivative(v, g) - lambda2_antiderivative(anchor.v, g);
  // u = u_a - int lambda_i, with lambda_1 = -lambda_2.
  return family == 1 ? anchor.u + integral_l2 : anchor.u - integral_l2;
}

BlBranch bl_branch(const EndState& w_minus, double v, const GasParams& g) {
  require_positive_volume(v, "bl_branch");
  if (v == w_minus.v) return BlBranch::Anchor;
  if (v < w_minus.v) return BlBranch::Compressing;
  const EndState sonic = sonic_intersection(w_minus, g);
  return v <= sonic.v ? BlBranch::Expanding : BlBranch::BeyondSonic;
}

}  // namespace inflow
