#pragma once

#include <stdexcept>
#include <string>

namespace mechlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke a documented precondition or a type invariant.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

/// A configuration object (mechanism config, constants profile, table) is invalid.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// An exact enumeration would exceed its explicit state budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

/// The instance is degenerate for the requested quantity (e.g. Opt == 0).
class DegenerateInstanceError : public Error {
 public:
  explicit DegenerateInstanceError(const std::string& what) : Error(what) {}
};

}  // namespace mechlab
