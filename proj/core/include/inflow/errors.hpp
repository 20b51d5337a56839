#pragma once

#include <stdexcept>
#include <string>

namespace inflow {

/// Broad failure classes. The CLI maps each to a fixed exit code.
enum class ErrorKind {
  Domain,        // argument outside the mathematical domain (v <= 0, u <= 0, ...)
  Degenerate,    // zero-strength shock
  Integration,   // adaptive ODE integration did not converge
  Inconsistent,  // end states not on the required curve
  Resolution,    // grid too coarse for the requested perturbation scale
  Inadmissible,  // initial data violate positivity / bounds / compatibility
  Divergence,    // integrand does not decay at the far field
  Config,        // malformed or invalid configuration
  BlowUp,        // positivity loss or NaN during time stepping
  Timeout,       // wall-clock budget exceeded
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class DegenerateShockError : public Error {
 public:
  explicit DegenerateShockError(const std::string& what)
      : Error(ErrorKind::Degenerate, "degenerate shock: " + what) {}
};

class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what)
      : Error(ErrorKind::Integration, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time)
      : Error(ErrorKind::BlowUp, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace inflow
