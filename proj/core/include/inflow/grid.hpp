#pragma once

// Uniform node grid on [0, L] and the discrete calculus shared by the
// perturbation, solver and diagnostics modules.

#include <cstddef>
#include <span>
#include <vector>

namespace inflow {

struct Grid {
  double L = 0.0;
  std::size_t N = 0;  // cells; nodes are 0..N
  double dx = 0.0;

  std::size_t nodes() const { return N + 1; }
  double xi(std::size_t j) const { return static_cast<double>(j) * dx; }
  std::vector<double> abscissae() const;
};

/// Throws ConfigError unless L > 0 and N >= 2.
Grid make_grid(double L, std::size_t N);

/// Composite trapezoid rule on uniform samples.
double trapezoid(std::span<const double> f, double dx);

/// F_j = -int_{xi_j}^{xi_N} f by the trapezoid rule, so F_N = 0.
std::vector<double> cumulative_from_right(std::span<const double> f, double dx);

/// Centered differences inside, second-order one-sided at both ends.
std::vector<double> derivative(std::span<const double> f, double dx);
std::vector<double> second_derivative(std::span<const double> f, double dx);

/// Discrete L2 norm via the trapezoid rule.
double l2_norm(std::span<const double> f, double dx);

/// max - min; throws DomainError on an empty field.
double oscillation(std::span<const double> f);

}  // namespace inflow
