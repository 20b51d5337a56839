#include "inflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inflow/errors.hpp"

namespace inflow {

std::vector<double> Grid::abscissae() const {
  std::vector<double> out(nodes());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = xi(j);
  return out;
}

Grid make_grid(double L, std::size_t N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid length must be positive");
  if (N < 2) throw ConfigError("grid needs at least 2 cells, got " + std::to_string(N));
  return {L, N, L / static_cast<double>(N)};
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
  return sum * dx;
}

std::vector<double> cumulative_from_right(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t j = f.size(); j-- > 1;) {
    out[j - 1] = out[j] - 0.5 * dx * (f[j - 1] + f[j]);
  }
  return out;
}

std::vector<double> derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) {
    if (n == 2) out[0] = out[1] = (f[1] - f[0]) / dx;
    return out;
  }
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return out;
}

std::vector<double> second_derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 4) return out;
  const double h2 = dx * dx;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return out;
}

double l2_norm(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() * f.front() + f.back() * f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j] * f[j];
  return std::sqrt(sum * dx);
}

double oscillation(std::span<const double> f) {
  if (f.empty()) throw DomainError("oscillation of an empty field");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return *hi - *lo;
}

}  // namespace inflow
