#pragma once

#include <stdexcept>
#include <string>

namespace graftlab {

// Base for every error raised by the library. The CLI maps subclasses to
// distinct exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (JSON schema, gluing tables, weight vectors).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical procedure failed to meet its contract (step underflow, fit residual).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A geometric precondition does not hold (point outside a region, degenerate input).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace graftlab
