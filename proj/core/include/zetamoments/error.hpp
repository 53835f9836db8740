#pragma once

#include <stdexcept>
#include <string>

namespace zm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iteration did not reach its tolerance within the allowed budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A data file could not be parsed or failed an integrity check.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Zero isolation could not account for every zero predicted by the counting function.
class MissingZeroError : public Error {
 public:
  MissingZeroError(const std::string& what, double block_lo, double block_hi)
      : Error(what), block_lo_(block_lo), block_hi_(block_hi) {}

  double block_lo() const noexcept { return block_lo_; }
  double block_hi() const noexcept { return block_hi_; }

 private:
  double block_lo_;
  double block_hi_;
};

/// Prediction coefficients for the requested moment are not available.
class CoefficientsUnavailable : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);

}  // namespace zm
