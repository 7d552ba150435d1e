#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pss/rational.hpp"

namespace pss {

namespace detail {
struct RatForm;
using FormPtr = std::shared_ptr<const RatForm>;
}  // namespace detail

/// Elementary functions usable inside expressions. Tan is accepted when
/// building expressions but is rewritten to sin/cos and never stored.
enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Ln, Sqrt, Arctan };

const char* func_name(Func f);

/// A base variable: coordinate x or t, jet variable z_i (pure x-derivative
/// of u) or w_j (pure t-derivative), or a named parameter.
struct Var {
  enum class Kind : std::uint8_t { X, T, Z, W, Param };
  Kind kind = Kind::X;
  int index = 0;
  std::string name;

  static Var x() { return {Kind::X, 0, {}}; }
  static Var t() { return {Kind::T, 0, {}}; }
  static Var z(int i) { return {Kind::Z, i, {}}; }
  static Var w(int j) { return {Kind::W, j, {}}; }
  static Var param(std::string n) { return {Kind::Param, 0, std::move(n)}; }

  std::string str() const;
  friend bool operator==(const Var& a, const Var& b) {
    return a.kind == b.kind && a.index == b.index && a.name == b.name;
  }
  friend bool operator<(const Var& a, const Var& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.index != b.index) return a.index < b.index;
    return a.name < b.name;
  }
};

/// Which variables occur in an expression (kernel arguments included).
struct VarSet {
  bool x = false;
  bool t = false;
  std::set<int> z;
  std::set<int> w;
  std::set<std::string> params;

  int max_z() const { return z.empty() ? -1 : *z.rbegin(); }
  int max_w() const { return w.empty() ? -1 : *w.rbegin(); }
  bool has_jets() const { return !z.empty() || !w.empty(); }
  void merge(const VarSet& o);
  std::vector<Var> sorted() const;
};

/// Point at which an expression is evaluated numerically.
struct Env {
  double x = 0;
  double t = 0;
  std::vector<double> z;  ///< z[i]; missing entries read as 0
  std::vector<double> w;  ///< w[j]; w[0] unused
  std::map<std::string, double, std::less<>> params;

  double get(const Var& v) const;
  void set(const Var& v, double value);
};

/// Domain guards for numeric evaluation. The defaults reject only genuine
/// domain violations; the random sampler tightens them to keep
/// transcendentals well-conditioned.
struct EvalGuards {
  double min_abs_den = 0;
  double min_sqrt_arg = 0;
  double min_ln_arg = 0;
  double max_exp_arg = 700;
};

/// Immutable symbolic expression over coordinates, jet variables, named
/// parameters and elementary functions.
///
/// Internally an Expr is always held in a canonical rational form
/// (numerator/denominator polynomials over atoms) with exact rational
/// coefficients and these rewrite relations applied:
///   cos(g)^2 -> 1 - sin(g)^2,  sqrt(p)^2 -> p,  exp(a)*exp(b) -> exp(a+b),
///   tan(g) -> sin(g)/cos(g).
/// Structural equality is decidable via operator==.
class Expr {
 public:
  Expr();  // zero
  ~Expr();
  Expr(const Expr&);
  Expr(Expr&&) noexcept;
  Expr& operator=(const Expr&);
  Expr& operator=(Expr&&) noexcept;

  static Expr rational(long long num, long long den = 1);
  static Expr rational(Rational r);
  static Expr x();
  static Expr t();
  static Expr z(int i);
  static Expr w(int j);
  static Expr param(std::string name);
  static Expr var(const Var& v);
  static Expr apply(Func f, const Expr& arg);

  Expr operator-() const;
  Expr pow(int n) const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);

  friend bool operator==(const Expr&, const Expr&);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  bool is_literal_zero() const;
  bool is_literal_one() const;
  std::optional<Rational> as_rational() const;

  VarSet vars() const;

  /// Exact partial derivative with respect to a coordinate or jet variable.
  Expr partial(const Var& v) const;

  Expr subst_params(const std::map<std::string, Expr>& bindings) const;

  double eval(const Env& env, const EvalGuards& guards = {}) const;

  /// Canonical, re-parseable text.
  std::string str() const;

  const detail::RatForm& form() const { return *form_; }
  const detail::FormPtr& form_ptr() const { return form_; }
  static Expr from_form(detail::FormPtr f);

 private:
  explicit Expr(detail::FormPtr f) : form_(std::move(f)) {}
  detail::FormPtr form_;
};

/// Canonical form plus the conditional half-angle rewrite: when kernels of
/// both g and g/2 co-occur, sin(g) -> 2 sin(g/2) cos(g/2) and
/// cos(g) -> 1 - 2 sin(g/2)^2. Idempotent, total.
Expr normalize(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace pss
