#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pss/equation.hpp"
#include "pss/forms.hpp"
#include "pss/problem.hpp"
#include "pss/zero.hpp"

namespace pss {

/// Outcome of one named check. `passed` reflects the check's own success
/// notion: identity checks pass on zero/probably-zero, the Lemma's
/// nondegeneracy condition passes on nonzero.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Zero;
  bool passed = true;
  std::string residual;
  std::optional<Witness> witness;
  double millis = 0;
  /// Informational classification lines (universality) carry their text here
  /// and are excluded from pass/fail gating.
  bool informational = false;
  std::string info;
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  void sort_canonical();
  void append(const Report& other);

  /// Human-readable block (includes residuals and timings).
  std::string text() const;
  /// Machine-readable summary, one line per check:
  /// name <TAB> verdict-or-info <TAB> witness-if-any. Deterministic for a
  /// fixed seed (timings are deliberately excluded).
  std::string summary() const;

  static Report merge(std::span<const Report> parts);
};

/// Delta determinants of the eta-pss structure equations:
/// d12 = f11 f22 - eta f12, d13 = f11 f32 - f31 f12, d23 = eta f32 - f31 f22.
DeltaTriple delta(const OneFormTriple& forms, const Expr& eta);

/// Residuals of the structure equations in general determinant form
/// (valid for any f21):
///   D_t f11 - D_x f12 - (f21 f32 - f31 f22)
///   D_x f22 - D_t f21 - (f11 f32 - f31 f12)
///   D_t f31 - D_x f32 + (f11 f22 - f12 f21)
Report check_structure(const OneFormTriple& forms, const EquationDef& eq,
                       const ZeroOptions& opt = {});

/// Necessary conditions on the coefficients of an eta-pss evolution
/// equation. f11/f31 are tested free of z1..zk (z0 allowed); the final
/// condition (f11_z0^2 + f31_z0^2 != 0) passes when nonzero.
Report check_lemma_conditions(const OneFormTriple& forms,
                              const EquationDef& eq, const Expr& eta,
                              const ZeroOptions& opt = {});

/// Gauss equation residual a c - b^2 + 1.
Report check_gauss(const SecondFundamentalForm& sff,
                   const ZeroOptions& opt = {});

/// Both Codazzi residuals in general determinant form.
Report check_codazzi(const OneFormTriple& forms, const EquationDef& eq,
                     const SecondFundamentalForm& sff,
                     const ZeroOptions& opt = {});

struct UniversalityResult {
  bool universal = true;
  int jet_order = -1;     // highest z_i occurring, -1 if none
  bool depends_w = false;
  std::string describe() const;
};

/// "universal" iff no jet variable occurs in a, b or c after normalization.
UniversalityResult classify_universality(const SecondFundamentalForm& sff);

/// The 2x2 matrices of the associated linear problem,
/// dv = (M_x dx + M_t dt) v; both are traceless by construction.
struct LinearProblem {
  std::array<std::array<Expr, 2>, 2> mx, mt;

  /// Entries of D_t M_x - D_x M_t + [M_x, M_t]; all vanish modulo the
  /// equation exactly when the structure equations hold.
  std::array<std::array<Expr, 2>, 2> zero_curvature_residual(
      const EquationDef& eq) const;
};

LinearProblem linear_problem(const OneFormTriple& forms);

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Check groups to run; empty = every group applicable to the problem.
  std::vector<std::string> groups;
};

/// Orchestrates every applicable check for a parsed problem, including the
/// universality classification when an sff is present. Constraints from the
/// problem definition feed the sampling domain.
Report run_checks(const ProblemDef& problem, const VerifyOptions& opt = {});

}  // namespace pss
