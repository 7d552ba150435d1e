#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pss/equation.hpp"
#include "pss/expr.hpp"

namespace pss {

/// Resolution context for identifiers in expression source text.
///
/// Jet aliases are always available: u = z0, u_x .. u_xxxxxxxxx = z1..z9
/// (then positional z10, z11, ...), u_t/u_tt/... = w1, w2, ..., plus the
/// literal names zN and wN and the coordinates x and t.
struct SymbolContext {
  /// Named symbols (parameters and definition macros) resolved eagerly.
  std::map<std::string, Expr> symbols;
  /// Unknown identifiers become free parameters when set.
  bool allow_unknown = true;
  /// When set, jet usage is validated against the scheme: hyperbolic
  /// expressions may use z0, z1, w1 only; evolution expressions no w at all.
  std::optional<Scheme> scheme;
  int max_jet = 12;
};

/// Parse an expression. Throws ParseError with 1-based line/column.
Expr parse_expr(std::string_view src);
Expr parse_expr(std::string_view src, const SymbolContext& ctx);

/// Resolve a single identifier the way the expression grammar does
/// (aliases included). Returns nullopt for names that are not variables.
std::optional<Var> resolve_builtin_name(std::string_view name);

}  // namespace pss
