#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace inflow::ode {

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  double initial_step = 1e-3;
  double max_step = 1.0;      // magnitude cap on a single step
  double max_length = 1e8;    // magnitude cap on |x - x0|
  std::size_t max_steps = 2'000'000;
};

struct Trajectory {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t rejected = 0;
};

/// Integrates the autonomous scalar ODE y' = f(y) from (x0, y0) with the
/// Dormand-Prince 5(4) pair, in the direction of sign(direction), until
/// stop(y) returns true for an accepted step. Every accepted step is
/// recorded. Throws IntegrationError if the budget runs out first.
Trajectory integrate_until(const std::function<double(double)>& f, double x0, double y0,
                           double direction, const std::function<bool(double)>& stop,
                           const AdaptiveOptions& opts);

}  // namespace inflow::ode
