#pragma once

// Canonical rational-form engine behind pss::Expr. Expressions are held as
// num/den polynomials over "atoms": coordinates, jet variables, parameters
// and kernel applications sin/cos/exp/ln/sqrt/arctan (tan is rewritten on
// construction). Reduction relations maintained by the arithmetic:
//   cos(g)^2 -> 1 - sin(g)^2
//   sqrt(p)^2 -> p
//   exp(a) * exp(b) -> exp(a + b)   (one exp factor per monomial)
// Denominators are sign- and content-normalized, so zero expressions have a
// literal empty numerator.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pss/errors.hpp"
#include "pss/expr.hpp"
#include "pss/rational.hpp"

namespace pss::detail {

enum class AtomKind : std::uint8_t {
  CoordX = 0,
  CoordT,
  JetZ,
  JetW,
  Param,
  Kernel
};

struct Atom {
  AtomKind kind = AtomKind::CoordX;
  int index = 0;       // JetZ/JetW order
  std::string name;    // Param
  Func func = Func::Sin;  // Kernel (never Tan)
  FormPtr arg;         // Kernel argument, canonical
};

using AtomPtr = std::shared_ptr<const Atom>;

int cmp(const Atom& a, const Atom& b);
int cmp(const RatForm& a, const RatForm& b);

struct Factor {
  AtomPtr atom;
  int exp = 1;
};

/// Sorted by atom, exponents >= 1, at most one Exp kernel (with exponent 1).
struct Monomial {
  std::vector<Factor> factors;
  bool is_unit() const { return factors.empty(); }
};

int cmp(const Monomial& a, const Monomial& b);

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return cmp(a, b) < 0;
  }
};

/// Empty map == the zero polynomial.
using Poly = std::map<Monomial, Rational, MonoLess>;

struct RatForm {
  Poly num;
  Poly den;  // canonical: nonempty, positive leading coefficient
};

// ---- atoms ---------------------------------------------------------------
AtomPtr atom_var(const Var& v);

// ---- polynomials ---------------------------------------------------------
Poly p_zero();
Poly p_one();
Poly p_const(const Rational& r);
Poly p_atom(const AtomPtr& a);
bool p_is_zero(const Poly& p);
std::optional<Rational> p_as_const(const Poly& p);
bool p_equal(const Poly& a, const Poly& b);
int cmp(const Poly& a, const Poly& b);
Poly p_add(const Poly& a, const Poly& b);
Poly p_sub(const Poly& a, const Poly& b);
Poly p_neg(const Poly& a);
Poly p_scale(const Poly& a, const Rational& c);
Poly p_mul(const Poly& a, const Poly& b);
Poly p_pow(const Poly& a, unsigned n);

// ---- canonical forms -----------------------------------------------------
FormPtr f_zero();
FormPtr f_one();
FormPtr f_const(const Rational& r);
FormPtr f_atom(const AtomPtr& a);
FormPtr f_var(const Var& v);

/// Canonicalize num/den: reduction fixpoint, exp-free denominator factoring,
/// common monomial factor, exact trial division, content and sign.
FormPtr make(Poly num, Poly den);

FormPtr f_add(const FormPtr& a, const FormPtr& b);
FormPtr f_sub(const FormPtr& a, const FormPtr& b);
FormPtr f_neg(const FormPtr& a);
FormPtr f_mul(const FormPtr& a, const FormPtr& b);
FormPtr f_div(const FormPtr& a, const FormPtr& b);  // throws on zero divisor
FormPtr f_pow(const FormPtr& a, int n);
FormPtr f_scale(const FormPtr& a, const Rational& c);

FormPtr make_kernel(Func f, const FormPtr& arg);

bool f_equal(const FormPtr& a, const FormPtr& b);
bool f_is_zero(const FormPtr& a);
bool f_is_one(const FormPtr& a);
std::optional<Rational> f_as_const(const FormPtr& a);

// ---- analysis ------------------------------------------------------------
void collect_vars(const RatForm& f, VarSet& out);

FormPtr derivative(const FormPtr& f, const Var& v);

struct AtomPtrLess {
  bool operator()(const AtomPtr& a, const AtomPtr& b) const {
    return cmp(*a, *b) < 0;
  }
};
using AtomSubst = std::map<AtomPtr, FormPtr, AtomPtrLess>;

/// Replace atoms by forms. With recurse_args the substitution also applies
/// inside kernel arguments (used for parameter substitution); without it the
/// kernels' arguments are left untouched (used by the half-angle rewrite).
FormPtr subst_atoms(const FormPtr& f, const AtomSubst& s, bool recurse_args);

FormPtr subst_params(const FormPtr& f,
                     const std::map<std::string, FormPtr>& bindings);

double eval(const RatForm& f, const Env& env, const EvalGuards& g);

/// Conditional half-angle rewrite applied to fixpoint.
FormPtr half_angle(const FormPtr& f);

std::string to_string(const RatForm& f);

}  // namespace pss::detail
