#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mfg {

/// Argument outside the mathematical domain of an operation (m < 0, w <= 0, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration. Carries the offending keys.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : std::runtime_error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

/// A linear solve failed or produced an inadmissible state.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// w <= 0 in the backward heat march or mu < -1e-12 in the Fokker-Planck march.
class PositivityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Heat-kernel space-time norm requested for a non-integrable exponent.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double analytic_exponent)
      : std::runtime_error(what), analytic_exponent_(analytic_exponent) {}
  double analytic_exponent() const noexcept { return analytic_exponent_; }

 private:
  double analytic_exponent_;
};

}  // namespace mfg
