#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pss/expr.hpp"

namespace pss {

enum class Verdict : std::uint8_t { Zero, ProbablyZero, NonZero };

const char* verdict_name(Verdict v);

/// Sample point demonstrating a nonzero value.
struct Witness {
  std::vector<std::pair<std::string, double>> assignment;  // sorted by name
  double value = 0;
  std::string str() const;
};

/// Side constraint on the sampling domain, e.g. eta != 0 or l > 0.
struct Constraint {
  enum class Kind : std::uint8_t { NonZero, Positive };
  Expr expr;
  Kind kind = Kind::NonZero;
  std::string text;  // original source text, for reporting
};

struct ZeroOptions {
  std::uint64_t seed = 0;
  int points = 20;
  double tol = 1e-9;
  double lo = -2.0;
  double hi = 2.0;
  /// Attempts allowed to find each admissible sample point before the
  /// sampler reports domain exhaustion.
  int max_attempts = 400;
  std::vector<Constraint> constraints;
};

/// Two-tier zero decision: exact canonical normal form first, then a seeded
/// probabilistic evaluation at `points` admissible sample points.
/// Throws SamplingError when the domain is exhausted.
Verdict is_zero(const Expr& e, const ZeroOptions& opt = {},
                Witness* witness = nullptr);

}  // namespace pss
