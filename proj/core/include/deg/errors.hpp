#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deg {

/// Base error carrying the name of the module that raised it, so the CLI can
/// emit machine-readable {module, cause} reports.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  [[nodiscard]] const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Precondition violation on a physical quantity (negative thickness, stretch
/// outside the admissible range, ...). Maps to exit code 4.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Config-file problem: unknown key, missing field, unparseable or
/// non-physical value. Carries all problems found, not just the first.
/// Maps to exit code 2.
class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& what,
              std::vector<std::string> details = {})
      : Error(std::move(module), what), details_(std::move(details)) {}

  [[nodiscard]] const std::vector<std::string>& details() const noexcept {
    return details_;
  }

 private:
  std::vector<std::string> details_;
};

/// A requested design violates a failure criterion. Maps to exit code 3.
class InfeasibleDesign : public Error {
 public:
  InfeasibleDesign(std::string module, const std::string& what,
                   std::string criterion)
      : Error(std::move(module), what), criterion_(std::move(criterion)) {}

  [[nodiscard]] const std::string& criterion() const noexcept {
    return criterion_;
  }

 private:
  std::string criterion_;
};

/// Numerical failure: no convergence, degenerate estimation window,
/// unidentifiable fit. Maps to exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace deg
