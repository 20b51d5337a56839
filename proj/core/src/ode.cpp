#include "inflow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inflow/errors.hpp"

namespace inflow::ode {

namespace {

// Dormand-Prince 5(4) tableau. The stage-7 row equals the 5th order weights
// (FSAL), so e holds b5 - b4.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace

Trajectory integrate_until(const std::function<double(double)>& f, double x0, double y0,
                           double direction, const std::function<bool(double)>& stop,
                           const AdaptiveOptions& opts) {
  const double sign = direction < 0.0 ? -1.0 : 1.0;
  Trajectory out;
  out.x.push_back(x0);
  out.y.push_back(y0);
  if (stop(y0)) return out;

  double x = x0;
  double y = y0;
  double h = std::min(std::abs(opts.initial_step), opts.max_step);
  double k1 = f(y);

  for (std::size_t steps = 0; steps < opts.max_steps; ++steps) {
    const double k2 = f(y + h * sign * (a21 * k1));
    const double k3 = f(y + h * sign * (a31 * k1 + a32 * k2));
    const double k4 = f(y + h * sign * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + h * sign * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        f(y + h * sign * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y_new = y + h * sign * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(y_new);
    const double err =
        h * std::abs(e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(y_new));
    const double ratio = err / scale;

    if (!std::isfinite(y_new)) {
      throw IntegrationError("non-finite state at x = " + std::to_string(x));
    }
    if (ratio <= 1.0) {
      x += sign * h;
      y = y_new;
      k1 = k7;
      out.x.push_back(x);
      out.y.push_back(y);
      if (stop(y)) return out;
      if (std::abs(x - x0) > opts.max_length) break;
    } else {
      ++out.rejected;
    }
    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h = std::min(h * factor, opts.max_step);
  }
  std::ostringstream os;
  os << "adaptive integration did not reach its target: x = " << x << ", y = " << y
     << " after " << out.x.size() << " accepted and " << out.rejected << " rejected steps";
  throw IntegrationError(os.str());
}

}  // namespace inflow::ode
