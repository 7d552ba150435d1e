#pragma once

#include <stdexcept>
#include <string>

namespace pss {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed expression or problem-file input. Positions are 1-based.
struct ParseError : Error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg), line(line_), col(col_) {}
};

/// Operation applied to an equation of the wrong scheme, or a coefficient
/// referencing variables the scheme does not provide.
struct SchemeError : Error {
  using Error::Error;
};

/// A total derivative would need a jet variable above the configured bound.
struct OrderOverflowError : Error {
  using Error::Error;
};

/// Numeric evaluation left the real domain (sqrt of a negative, ln of a
/// nonpositive value, division by zero, exp overflow).
struct EvalDomainError : Error {
  using Error::Error;
};

/// The random evaluator could not find enough admissible sample points.
struct SamplingError : Error {
  using Error::Error;
};

/// Frame integration hit the degeneracy mask, or the forms are degenerate
/// on the whole grid.
struct DegeneracyError : Error {
  using Error::Error;
};

/// Numeric PDE solve diverged or violated its residual tolerance.
struct SolverError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace pss
