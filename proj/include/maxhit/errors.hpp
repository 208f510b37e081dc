#pragma once

#include <stdexcept>
#include <string>

namespace maxhit {

/// Parameter or argument outside the mathematical domain of an operation.
/// Reuses std::domain_error so callers can catch the standard type.
using domain_error = std::domain_error;

/// Operation asked for in a parameter regime where no formula applies
/// (e.g. closed-form moments with nonzero drift).
class regime_error : public std::domain_error {
public:
  explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

/// Transform argument outside its convergence region.
class convergence_region_error : public std::domain_error {
public:
  explicit convergence_region_error(const std::string& what)
      : std::domain_error(what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance.
class quadrature_error : public std::runtime_error {
public:
  explicit quadrature_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Requested computation exceeds the configured compute budget.
class budget_error : public std::runtime_error {
public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration (step sizes, horizons, counts).
class config_error : public std::invalid_argument {
public:
  explicit config_error(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace maxhit
