#pragma once

#include <stdexcept>
#include <string>

namespace bgibbs {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside its mathematical domain (e.g. x not in (0,1), or outside
// the abscissa range of a tabulated function).
struct DomainError : Error {
  using Error::Error;
};

// Invalid construction parameters or malformed inputs.
struct ValueError : Error {
  using Error::Error;
};

// A boundary evaluation (theta_bar in {0,1}) was requested but the loss has
// no finite one-sided limit there.
struct EndpointExtensionError : Error {
  using Error::Error;
};

// The loss does not satisfy the consistency conditions required by the
// requested operation.
struct ConditionError : Error {
  using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance within the
// panel budget.
struct QuadratureError : Error {
  using Error::Error;
};

// A density is positive where its reference measure vanishes.
struct SupportViolationError : Error {
  using Error::Error;
};

// Malformed specification string, CSV file, or config file.
struct ParseError : Error {
  using Error::Error;
};

// Least-squares fit is degenerate (too few rows or singular design).
struct FitError : Error {
  using Error::Error;
};

}  // namespace bgibbs
