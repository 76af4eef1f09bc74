#pragma once

#include <stdexcept>
#include <string>

namespace glcorner {

// Base class. The CLI maps UsageError and GeometryError to exit code 2, the rest to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or inputs (bad b, malformed file, unknown shape, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Geometry failures: non-closed curves, bad corner angles, projection problems.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Solver failures: iteration caps, non-convergence, singular factorizations.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double last_residual = -1.0)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// Raised when the curved weight 1 - eps*k*t reaches zero inside the domain.
class FocalSingularity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace glcorner
