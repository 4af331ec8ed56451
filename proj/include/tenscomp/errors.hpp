#pragma once

#include <stdexcept>
#include <string>

namespace tenscomp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Index outside [0, n).
struct BoundsError : Error {
  using Error::Error;
};

// Dimension / rank mismatch between arguments.
struct ShapeError : Error {
  using Error::Error;
};

// Parameter outside its admissible range (p, delta, mu, ...).
struct DomainError : Error {
  using Error::Error;
};

// A quantity that must be nonzero (vector norm, denominator, trial image)
// vanished, or every randomized attempt collapsed.
struct DegenerateError : Error {
  using Error::Error;
};

// Iterative search failed to reach its target within budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// Inputs violate a documented entry condition of a check.
struct PreconditionError : Error {
  using Error::Error;
};

// Inconsistent run configuration (missing partitions, bad mode combos).
struct ConfigError : Error {
  using Error::Error;
};

// Problem size outside the supported range of an exact routine.
struct ScaleError : Error {
  using Error::Error;
};

// A triple was required to belong to a support set and does not.
struct MembershipError : Error {
  using Error::Error;
};

// Malformed input file; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace tenscomp
