#pragma once

#include <stdexcept>
#include <string>

namespace orbitflow {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed value: tag mismatch, broken structural invariant, bad shape.
struct StructuralError : Error {
  using Error::Error;
};

/// Input outside an operation's mathematical domain (e.g. a centralizer
/// component where none is allowed, a non-tangent vector field).
struct DomainError : Error {
  using Error::Error;
};

/// A numerical procedure failed: singular factor, rank collapse,
/// reconstruction defect beyond its bound.
struct NumericalError : Error {
  using Error::Error;
};

/// Two redundant evaluation routes disagreed beyond tolerance.
struct ConsistencyError : Error {
  using Error::Error;
};

/// Non-finite values appeared while time stepping.
struct BlowUpError : Error {
  long step;
  BlowUpError(const std::string& what, long step_index)
      : Error(what + " (step " + std::to_string(step_index) + ")"), step(step_index) {}
};

/// Unparseable or contradictory run configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace orbitflow
