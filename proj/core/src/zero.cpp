#include "pss/zero.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero:
      return "zero";
    case Verdict::ProbablyZero:
      return "probably-zero";
    case Verdict::NonZero:
      return "nonzero";
  }
  return "?";
}

std::string Witness::str() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [name, v] : assignment) {
    if (!first) os << ", ";
    os << name << "=" << v;
    first = false;
  }
  if (!first) os << " ";
  os << "-> " << value;
  return os.str();
}

namespace {

// Uniform double in [0,1) built directly from the engine output so results
// do not depend on the standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr double kConstraintMargin = 1e-6;

}  // namespace

Verdict is_zero(const Expr& e, const ZeroOptions& opt, Witness* witness) {
  Expr n = normalize(e);
  if (n.is_literal_zero()) return Verdict::Zero;

  VarSet vs = n.vars();
  for (const auto& c : opt.constraints) vs.merge(c.expr.vars());
  std::vector<Var> vars = vs.sorted();

  // Transcendentals stay well-conditioned inside these guards; points that
  // violate them are rejected and resampled.
  EvalGuards guards;
  guards.min_abs_den = 1e-6;
  guards.min_sqrt_arg = 1e-6;
  guards.min_ln_arg = 1e-6;
  guards.max_exp_arg = 300;

  std::mt19937_64 rng(opt.seed);
  int evaluated = 0;
  for (int point = 0; point < opt.points; ++point) {
    bool found = false;
    for (int attempt = 0; attempt < opt.max_attempts && !found; ++attempt) {
      Env env;
      for (const auto& v : vars)
        env.set(v, opt.lo + (opt.hi - opt.lo) * uniform01(rng));
      try {
        bool ok = true;
        for (const auto& c : opt.constraints) {
          double cv = c.expr.eval(env, guards);
          if (c.kind == Constraint::Kind::NonZero &&
              std::abs(cv) <= kConstraintMargin)
            ok = false;
          if (c.kind == Constraint::Kind::Positive && cv <= kConstraintMargin)
            ok = false;
          if (!ok) break;
        }
        if (!ok) continue;
        double value = n.eval(env, guards);
        if (!std::isfinite(value)) continue;
        found = true;
        ++evaluated;
        if (std::abs(value) >= opt.tol) {
          if (witness) {
            witness->assignment.clear();
            for (const auto& v : vars)
              witness->assignment.emplace_back(v.str(), env.get(v));
            witness->value = value;
          }
          return Verdict::NonZero;
        }
      } catch (const EvalDomainError&) {
        // inadmissible point; resample
      }
    }
    if (!found)
      throw SamplingError(
          "could not find an admissible sample point for the zero test");
  }
  (void)evaluated;
  return Verdict::ProbablyZero;
}

}  // namespace pss
