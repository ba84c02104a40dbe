#pragma once

#include <stdexcept>
#include <string>

namespace lvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  /// Short machine-readable tag, e.g. "structural".
  virtual const char* reason() const noexcept = 0;
};

/// Objects built on different outcome spaces, or malformed shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* reason() const noexcept override { return "structural"; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* reason() const noexcept override { return "domain"; }
};

/// A precondition or internal cross-check failed.
class ContractError : public Error {
 public:
  using Error::Error;
  const char* reason() const noexcept override { return "contract"; }
};

/// An iterative routine failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  const char* reason() const noexcept override { return "numeric"; }
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace lvar
