#pragma once

#include <stdexcept>
#include <string>

namespace colnoise {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the domain of a function (e.g. B at t = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A kernel failed its positivity / monotonicity / convexity contract.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or eigensolver failed to reach its target.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved = 0.0)
      : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A truncation (Fock space, spectral tail) is too coarse for the requested accuracy.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace colnoise
