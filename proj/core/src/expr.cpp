#include "pss/expr.hpp"

#include <ostream>
#include <sstream>

#include "form.hpp"

namespace pss {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin:
      return "sin";
    case Func::Cos:
      return "cos";
    case Func::Tan:
      return "tan";
    case Func::Exp:
      return "exp";
    case Func::Ln:
      return "ln";
    case Func::Sqrt:
      return "sqrt";
    case Func::Arctan:
      return "arctan";
  }
  return "?";
}

std::string Var::str() const {
  switch (kind) {
    case Kind::X:
      return "x";
    case Kind::T:
      return "t";
    case Kind::Z:
      return "z" + std::to_string(index);
    case Kind::W:
      return "w" + std::to_string(index);
    case Kind::Param:
      return name;
  }
  return {};
}

void VarSet::merge(const VarSet& o) {
  x = x || o.x;
  t = t || o.t;
  z.insert(o.z.begin(), o.z.end());
  w.insert(o.w.begin(), o.w.end());
  params.insert(o.params.begin(), o.params.end());
}

std::vector<Var> VarSet::sorted() const {
  std::vector<Var> out;
  if (x) out.push_back(Var::x());
  if (t) out.push_back(Var::t());
  for (int i : z) out.push_back(Var::z(i));
  for (int j : w) out.push_back(Var::w(j));
  for (const auto& p : params) out.push_back(Var::param(p));
  return out;
}

double Env::get(const Var& v) const {
  switch (v.kind) {
    case Var::Kind::X:
      return x;
    case Var::Kind::T:
      return t;
    case Var::Kind::Z:
      if (v.index < 0 || static_cast<std::size_t>(v.index) >= z.size())
        throw EvalDomainError("no sample for " + v.str());
      return z[v.index];
    case Var::Kind::W:
      if (v.index < 0 || static_cast<std::size_t>(v.index) >= w.size())
        throw EvalDomainError("no sample for " + v.str());
      return w[v.index];
    case Var::Kind::Param: {
      auto it = params.find(v.name);
      if (it == params.end())
        throw EvalDomainError("unbound parameter '" + v.name + "'");
      return it->second;
    }
  }
  return 0;
}

void Env::set(const Var& v, double value) {
  switch (v.kind) {
    case Var::Kind::X:
      x = value;
      return;
    case Var::Kind::T:
      t = value;
      return;
    case Var::Kind::Z:
      if (static_cast<std::size_t>(v.index) >= z.size()) z.resize(v.index + 1);
      z[v.index] = value;
      return;
    case Var::Kind::W:
      if (static_cast<std::size_t>(v.index) >= w.size()) w.resize(v.index + 1);
      w[v.index] = value;
      return;
    case Var::Kind::Param:
      params[v.name] = value;
      return;
  }
}

Expr::Expr() : form_(detail::f_zero()) {}
Expr::~Expr() = default;
Expr::Expr(const Expr&) = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(const Expr&) = default;
Expr& Expr::operator=(Expr&&) noexcept = default;

Expr Expr::rational(long long num, long long den) {
  if (den == 0) throw EvalDomainError("rational with zero denominator");
  return Expr(detail::f_const(Rational(BigInt(num), BigInt(den))));
}

Expr Expr::rational(Rational r) { return Expr(detail::f_const(r)); }

Expr Expr::x() { return Expr(detail::f_var(Var::x())); }
Expr Expr::t() { return Expr(detail::f_var(Var::t())); }

Expr Expr::z(int i) {
  if (i < 0) throw Error("jet order must be nonnegative");
  return Expr(detail::f_var(Var::z(i)));
}

Expr Expr::w(int j) {
  if (j < 1) throw Error("w jet order must be positive");
  return Expr(detail::f_var(Var::w(j)));
}

Expr Expr::param(std::string name) {
  if (name.empty()) throw Error("empty parameter name");
  return Expr(detail::f_var(Var::param(std::move(name))));
}

Expr Expr::var(const Var& v) {
  switch (v.kind) {
    case Var::Kind::X:
      return x();
    case Var::Kind::T:
      return t();
    case Var::Kind::Z:
      return z(v.index);
    case Var::Kind::W:
      return w(v.index);
    case Var::Kind::Param:
      return param(v.name);
  }
  return {};
}

Expr Expr::apply(Func f, const Expr& arg) {
  return Expr(detail::make_kernel(f, arg.form_));
}

Expr Expr::operator-() const { return Expr(detail::f_neg(form_)); }

Expr Expr::pow(int n) const { return Expr(detail::f_pow(form_, n)); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::f_add(a.form_, b.form_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::f_sub(a.form_, b.form_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::f_mul(a.form_, b.form_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::f_div(a.form_, b.form_));
}

bool operator==(const Expr& a, const Expr& b) {
  return detail::f_equal(a.form_, b.form_);
}

bool Expr::is_literal_zero() const { return detail::f_is_zero(form_); }
bool Expr::is_literal_one() const { return detail::f_is_one(form_); }

std::optional<Rational> Expr::as_rational() const {
  return detail::f_as_const(form_);
}

VarSet Expr::vars() const {
  VarSet out;
  detail::collect_vars(*form_, out);
  return out;
}

Expr Expr::partial(const Var& v) const {
  if (v.kind == Var::Kind::Param)
    throw Error("partial derivatives are taken in coordinates or jets, not parameters");
  if ((v.kind == Var::Kind::Z && v.index < 0) ||
      (v.kind == Var::Kind::W && v.index < 1))
    throw Error("unknown variable name '" + v.str() + "'");
  return Expr(detail::half_angle(detail::derivative(form_, v)));
}

Expr Expr::subst_params(const std::map<std::string, Expr>& bindings) const {
  std::map<std::string, detail::FormPtr> forms;
  for (const auto& [name, e] : bindings) forms.emplace(name, e.form_ptr());
  return Expr(detail::subst_params(form_, forms));
}

double Expr::eval(const Env& env, const EvalGuards& guards) const {
  return detail::eval(*form_, env, guards);
}

std::string Expr::str() const { return detail::to_string(*form_); }

Expr Expr::from_form(detail::FormPtr f) { return Expr(std::move(f)); }

Expr normalize(const Expr& e) {
  return Expr::from_form(detail::half_angle(e.form_ptr()));
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  return os << e.str();
}

}  // namespace pss
