#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pss/equation.hpp"
#include "pss/forms.hpp"
#include "pss/zero.hpp"

namespace pss {

/// Parameter binding in a problem definition. Definition macros (`name :=
/// expr`) are substituted eagerly while parsing and never appear here.
struct ParamBinding {
  bool free = true;
  Rational value = 0;  // meaningful when !free
};

/// A parsed problem file: equation, 1-forms, optional second fundamental
/// form, parameters and sampling constraints. Rational bindings are already
/// substituted into all expressions.
struct ProblemDef {
  std::string name;
  EquationDef equation;
  OneFormTriple forms;
  std::optional<SecondFundamentalForm> sff;
  std::map<std::string, ParamBinding> params;
  std::vector<Constraint> constraints;
  /// The spectral parameter eta when the problem declares `spectral = f21`;
  /// equals forms.f21 by construction.
  std::optional<Expr> spectral;
};

/// Parse a problem file (versioned header "pss-problem v1"). Overrides
/// rebind free or rational parameters before the eager substitution.
ProblemDef parse_problem(std::string_view src,
                         const std::map<std::string, Rational>& overrides = {});

}  // namespace pss
