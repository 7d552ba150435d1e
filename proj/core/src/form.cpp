#include "form.hpp"

#include <cmath>
#include <sstream>

namespace pss::detail {

namespace {

int sign_of(int c) { return c < 0 ? -1 : (c > 0 ? 1 : 0); }

int cmp_rational(const Rational& a, const Rational& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

bool is_exp_atom(const Atom& a) {
  return a.kind == AtomKind::Kernel && a.func == Func::Exp;
}

bool is_trig_atom(const Atom& a) {
  return a.kind == AtomKind::Kernel &&
         (a.func == Func::Sin || a.func == Func::Cos);
}

}  // namespace

// ---- comparisons -----------------------------------------------------------

int cmp(const Atom& a, const Atom& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case AtomKind::CoordX:
    case AtomKind::CoordT:
      return 0;
    case AtomKind::JetZ:
    case AtomKind::JetW:
      return sign_of(a.index - b.index);
    case AtomKind::Param:
      return sign_of(a.name.compare(b.name));
    case AtomKind::Kernel: {
      if (a.func != b.func)
        return static_cast<int>(a.func) < static_cast<int>(b.func) ? -1 : 1;
      return cmp(*a.arg, *b.arg);
    }
  }
  return 0;
}

// Lexicographic order on exponent vectors: atoms compared ascending, a higher
// exponent on the earliest differing atom makes the monomial larger. This is
// a proper monomial order (compatible with multiplication, unit smallest).
int cmp(const Monomial& a, const Monomial& b) {
  auto ia = a.factors.begin(), ib = b.factors.begin();
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ia == a.factors.end()) return -1;
    if (ib == b.factors.end()) return 1;
    int c = cmp(*ia->atom, *ib->atom);
    if (c < 0) return 1;   // a has a positive exponent where b has zero
    if (c > 0) return -1;
    if (ia->exp != ib->exp) return ia->exp > ib->exp ? 1 : -1;
    ++ia;
    ++ib;
  }
  return 0;
}

int cmp(const Poly& a, const Poly& b) {
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ia == a.end()) return -1;
    if (ib == b.end()) return 1;
    int c = cmp(ia->first, ib->first);
    if (c != 0) return c;
    c = cmp_rational(ia->second, ib->second);
    if (c != 0) return c;
    ++ia;
    ++ib;
  }
  return 0;
}

int cmp(const RatForm& a, const RatForm& b) {
  int c = cmp(a.num, b.num);
  if (c != 0) return c;
  return cmp(a.den, b.den);
}

bool p_equal(const Poly& a, const Poly& b) { return cmp(a, b) == 0; }

bool f_equal(const FormPtr& a, const FormPtr& b) {
  if (a == b) return true;
  return cmp(*a, *b) == 0;
}

// ---- atoms -----------------------------------------------------------------

AtomPtr atom_var(const Var& v) {
  auto a = std::make_shared<Atom>();
  switch (v.kind) {
    case Var::Kind::X:
      a->kind = AtomKind::CoordX;
      break;
    case Var::Kind::T:
      a->kind = AtomKind::CoordT;
      break;
    case Var::Kind::Z:
      a->kind = AtomKind::JetZ;
      a->index = v.index;
      break;
    case Var::Kind::W:
      a->kind = AtomKind::JetW;
      a->index = v.index;
      break;
    case Var::Kind::Param:
      a->kind = AtomKind::Param;
      a->name = v.name;
      break;
  }
  return a;
}

static AtomPtr atom_kernel(Func f, FormPtr arg) {
  auto a = std::make_shared<Atom>();
  a->kind = AtomKind::Kernel;
  a->func = f;
  a->arg = std::move(arg);
  return a;
}

// ---- polynomial primitives --------------------------------------------------

Poly p_zero() { return {}; }

Poly p_one() { return p_const(Rational(1)); }

Poly p_const(const Rational& r) {
  Poly p;
  if (r != 0) p.emplace(Monomial{}, r);
  return p;
}

Poly p_atom(const AtomPtr& a) {
  Poly p;
  Monomial m;
  m.factors.push_back({a, 1});
  p.emplace(std::move(m), Rational(1));
  return p;
}

bool p_is_zero(const Poly& p) { return p.empty(); }

std::optional<Rational> p_as_const(const Poly& p) {
  if (p.empty()) return Rational(0);
  if (p.size() == 1 && p.begin()->first.is_unit()) return p.begin()->second;
  return std::nullopt;
}

static void p_accumulate(Poly& into, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = into.find(m);
  if (it == into.end()) {
    into.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) into.erase(it);
  }
}

Poly p_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) p_accumulate(r, m, c);
  return r;
}

Poly p_sub(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) p_accumulate(r, m, -c);
  return r;
}

Poly p_neg(const Poly& a) {
  Poly r;
  for (const auto& [m, c] : a) r.emplace(m, -c);
  return r;
}

Poly p_scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly r;
  for (const auto& [m, coeff] : a) r.emplace(m, coeff * c);
  return r;
}

/// Multiply monomials, merging exp kernels additively.
static Monomial m_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::vector<std::pair<FormPtr, int>> exps;

  auto push = [&](const Factor& f) {
    if (is_exp_atom(*f.atom)) {
      exps.emplace_back(f.atom->arg, f.exp);
      return;
    }
    if (!out.factors.empty() && cmp(*out.factors.back().atom, *f.atom) == 0) {
      out.factors.back().exp += f.exp;
    } else {
      out.factors.push_back(f);
    }
  };

  auto ia = a.factors.begin(), ib = b.factors.begin();
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ia == a.factors.end()) {
      push(*ib++);
    } else if (ib == b.factors.end()) {
      push(*ia++);
    } else {
      int c = cmp(*ia->atom, *ib->atom);
      if (c <= 0) {
        push(*ia++);
      } else {
        push(*ib++);
      }
    }
  }

  if (!exps.empty()) {
    FormPtr arg = f_zero();
    for (const auto& [g, e] : exps)
      arg = f_add(arg, f_scale(g, Rational(e)));
    if (!f_is_zero(arg)) {
      Factor f{atom_kernel(Func::Exp, arg), 1};
      auto pos = out.factors.begin();
      while (pos != out.factors.end() && cmp(*pos->atom, *f.atom) < 0) ++pos;
      out.factors.insert(pos, f);
    }
  }
  return out;
}

Poly p_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) p_accumulate(r, m_mul(ma, mb), ca * cb);
  return r;
}

Poly p_pow(const Poly& a, unsigned n) {
  Poly r = p_one();
  Poly base = a;
  while (n > 0) {
    if (n & 1u) r = p_mul(r, base);
    n >>= 1u;
    if (n) base = p_mul(base, base);
  }
  return r;
}

// ---- reduction pass ---------------------------------------------------------

namespace {

bool mono_has_reducible(const Monomial& m) {
  for (const auto& f : m.factors) {
    if (f.exp < 2) continue;
    if (f.atom->kind != AtomKind::Kernel) continue;
    if (f.atom->func == Func::Cos || f.atom->func == Func::Sqrt) return true;
  }
  return false;
}

bool poly_has_reducible(const Poly& p) {
  for (const auto& [m, c] : p)
    if (mono_has_reducible(m)) return true;
  return false;
}

FormPtr lift(Poly p) {
  auto f = std::make_shared<RatForm>();
  f->num = std::move(p);
  f->den = p_one();
  return f;
}

struct ReduceGuard {
  static thread_local int depth;
  ReduceGuard() {
    if (++depth > 64) throw Error("expression reduction recursion too deep");
  }
  ~ReduceGuard() { --depth; }
};
thread_local int ReduceGuard::depth = 0;

/// Expand even powers of cos and sqrt kernels in one polynomial; the sqrt
/// rule can introduce denominators when radicands have them.
FormPtr reduce_poly(const Poly& p) {
  if (!poly_has_reducible(p)) return lift(p);
  ReduceGuard guard;
  FormPtr acc = f_zero();
  for (const auto& [m, c] : p) {
    if (!mono_has_reducible(m)) {
      Poly single;
      single.emplace(m, c);
      acc = f_add(acc, lift(std::move(single)));
      continue;
    }
    Monomial rest;
    FormPtr extra = f_const(c);
    for (const auto& f : m.factors) {
      bool cosr = f.atom->kind == AtomKind::Kernel && f.atom->func == Func::Cos;
      bool sqrtr =
          f.atom->kind == AtomKind::Kernel && f.atom->func == Func::Sqrt;
      if ((cosr || sqrtr) && f.exp >= 2) {
        int q = f.exp / 2, r = f.exp % 2;
        if (cosr) {
          // cos^2 -> 1 - sin^2
          FormPtr s = f_atom(atom_kernel(Func::Sin, f.atom->arg));
          FormPtr one_minus = f_sub(f_one(), f_mul(s, s));
          extra = f_mul(extra, f_pow(one_minus, q));
        } else {
          extra = f_mul(extra, f_pow(f.atom->arg, q));
        }
        if (r) rest.factors.push_back({f.atom, 1});
      } else {
        rest.factors.push_back(f);
      }
    }
    Poly rp;
    rp.emplace(std::move(rest), Rational(1));
    acc = f_add(acc, f_mul(lift(std::move(rp)), extra));
  }
  return acc;
}

Rational poly_content(const Poly& p) {
  BigInt g = 0, l = 1;
  for (const auto& [m, c] : p) {
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(c)));
    l = boost::multiprecision::lcm(l, denominator(c));
  }
  if (g == 0) return Rational(1);
  return Rational(g, l);
}

bool poly_has_exp(const Poly& p) {
  for (const auto& [m, c] : p)
    for (const auto& f : m.factors)
      if (is_exp_atom(*f.atom)) return true;
  return false;
}

/// Common non-exp atom powers across every monomial of both polynomials.
std::vector<Factor> common_monomial_factor(const Poly& a, const Poly& b) {
  std::vector<Factor> common;
  bool first = true;
  auto visit = [&](const Monomial& m) {
    if (first) {
      for (const auto& f : m.factors)
        if (!is_exp_atom(*f.atom)) common.push_back(f);
      first = false;
      return;
    }
    std::vector<Factor> next;
    for (const auto& cf : common) {
      for (const auto& f : m.factors) {
        if (cmp(*f.atom, *cf.atom) == 0) {
          next.push_back({cf.atom, std::min(cf.exp, f.exp)});
          break;
        }
      }
    }
    common = std::move(next);
  };
  for (const auto& [m, c] : a) {
    visit(m);
    if (common.empty()) return {};
  }
  for (const auto& [m, c] : b) {
    visit(m);
    if (common.empty()) return {};
  }
  return common;
}

Monomial mono_divide(const Monomial& m, const std::vector<Factor>& by) {
  Monomial out;
  for (const auto& f : m.factors) {
    int e = f.exp;
    for (const auto& d : by)
      if (cmp(*d.atom, *f.atom) == 0) e -= d.exp;
    if (e > 0) out.factors.push_back({f.atom, e});
  }
  return out;
}

Poly poly_divide_factors(const Poly& p, const std::vector<Factor>& by) {
  Poly out;
  for (const auto& [m, c] : p) out.emplace(mono_divide(m, by), c);
  return out;
}

bool mono_divides(const Monomial& d, const Monomial& n, Monomial& q) {
  q.factors.clear();
  auto in = n.factors.begin();
  for (const auto& df : d.factors) {
    while (in != n.factors.end() && cmp(*in->atom, *df.atom) < 0) {
      q.factors.push_back(*in);
      ++in;
    }
    if (in == n.factors.end() || cmp(*in->atom, *df.atom) != 0 ||
        in->exp < df.exp)
      return false;
    if (in->exp > df.exp) q.factors.push_back({in->atom, in->exp - df.exp});
    ++in;
  }
  while (in != n.factors.end()) q.factors.push_back(*in++);
  return true;
}

/// Exact multivariate division attempt (exp-free inputs, bounded work).
bool poly_try_divide(const Poly& n, const Poly& d, Poly& q) {
  q.clear();
  Poly r = n;
  int steps = 0;
  while (!r.empty()) {
    if (++steps > 4096) return false;
    const auto& [rm, rc] = *r.rbegin();
    const auto& [dm, dc] = *d.rbegin();
    Monomial qm;
    if (!mono_divides(dm, rm, qm)) return false;
    Rational qc = rc / dc;
    Poly term;
    term.emplace(qm, qc);
    p_accumulate(q, qm, qc);
    r = p_sub(r, p_mul(d, term));
  }
  return true;
}

const Monomial* leading_exp_mono(const Poly& p) {
  return p.empty() ? nullptr : &p.rbegin()->first;
}

const FormPtr* exp_arg_of(const Monomial& m) {
  for (const auto& f : m.factors)
    if (is_exp_atom(*f.atom)) return &f.atom->arg;
  return nullptr;
}

bool every_mono_has_exp(const Poly& p) {
  for (const auto& [m, c] : p)
    if (!exp_arg_of(m)) return false;
  return !p.empty();
}

}  // namespace

// ---- canonical construction --------------------------------------------------

FormPtr f_zero() {
  static const FormPtr z = [] {
    auto f = std::make_shared<RatForm>();
    f->den = p_one();
    return f;
  }();
  return z;
}

FormPtr f_one() {
  static const FormPtr o = [] {
    auto f = std::make_shared<RatForm>();
    f->num = p_one();
    f->den = p_one();
    return f;
  }();
  return o;
}

FormPtr f_const(const Rational& r) {
  if (r == 0) return f_zero();
  auto f = std::make_shared<RatForm>();
  f->num = p_const(r);
  f->den = p_one();
  return f;
}

FormPtr f_atom(const AtomPtr& a) { return make(p_atom(a), p_one()); }

FormPtr f_var(const Var& v) { return f_atom(atom_var(v)); }

FormPtr make(Poly num, Poly den) {
  if (p_is_zero(den)) throw EvalDomainError("division by zero expression");

  // reduction fixpoint (rewrites can reintroduce reducible powers)
  for (int pass = 0; pass < 64; ++pass) {
    bool nr = poly_has_reducible(num);
    bool dr = poly_has_reducible(den);
    if (!nr && !dr) break;
    FormPtr rn = nr ? reduce_poly(num) : lift(std::move(num));
    FormPtr rd = dr ? reduce_poly(den) : lift(std::move(den));
    num = p_mul(rn->num, rd->den);
    den = p_mul(rn->den, rd->num);
    if (p_is_zero(den))
      throw EvalDomainError("division by zero expression");
    if (pass == 63) throw Error("expression reduction did not stabilize");
  }

  auto out = std::make_shared<RatForm>();
  if (p_is_zero(num)) {
    out->den = p_one();
    return out;
  }
  if (p_equal(num, den)) {
    out->num = p_one();
    out->den = p_one();
    return out;
  }

  // factor a common exp(...) out of the denominator when every monomial
  // carries one; keeps denominators exp-free where possible
  if (every_mono_has_exp(den)) {
    const FormPtr* mu = exp_arg_of(*leading_exp_mono(den));
    Poly shift = p_atom(atom_kernel(Func::Exp, f_neg(*mu)));
    num = p_mul(num, shift);
    den = p_mul(den, shift);
  }

  // common monomial factor
  auto common = common_monomial_factor(num, den);
  if (!common.empty()) {
    num = poly_divide_factors(num, common);
    den = poly_divide_factors(den, common);
  }

  // exact division (cheap-guarded, exp-free only)
  if (den.size() >= 2 && num.size() >= den.size() && !poly_has_exp(num) &&
      !poly_has_exp(den)) {
    Poly q;
    if (poly_try_divide(num, den, q)) {
      num = std::move(q);
      den = p_one();
    }
  }

  // content and sign normalization against the denominator
  Rational c = poly_content(den);
  if (den.rbegin()->second < 0) c = -c;
  if (c != 1) {
    Rational inv = Rational(1) / c;
    num = p_scale(num, inv);
    den = p_scale(den, inv);
  }

  out->num = std::move(num);
  out->den = std::move(den);
  return out;
}

FormPtr f_add(const FormPtr& a, const FormPtr& b) {
  if (p_is_zero(a->num)) return b;
  if (p_is_zero(b->num)) return a;
  if (p_equal(a->den, b->den)) return make(p_add(a->num, b->num), a->den);
  return make(p_add(p_mul(a->num, b->den), p_mul(b->num, a->den)),
              p_mul(a->den, b->den));
}

FormPtr f_sub(const FormPtr& a, const FormPtr& b) {
  if (p_is_zero(b->num)) return a;
  if (p_equal(a->den, b->den)) return make(p_sub(a->num, b->num), a->den);
  return make(p_sub(p_mul(a->num, b->den), p_mul(b->num, a->den)),
              p_mul(a->den, b->den));
}

FormPtr f_neg(const FormPtr& a) {
  if (p_is_zero(a->num)) return a;
  auto f = std::make_shared<RatForm>();
  f->num = p_neg(a->num);
  f->den = a->den;
  return f;
}

FormPtr f_mul(const FormPtr& a, const FormPtr& b) {
  if (p_is_zero(a->num) || p_is_zero(b->num)) return f_zero();
  return make(p_mul(a->num, b->num), p_mul(a->den, b->den));
}

FormPtr f_div(const FormPtr& a, const FormPtr& b) {
  if (p_is_zero(b->num)) throw EvalDomainError("division by zero expression");
  if (p_is_zero(a->num)) return f_zero();
  return make(p_mul(a->num, b->den), p_mul(a->den, b->num));
}

FormPtr f_pow(const FormPtr& a, int n) {
  if (n == 0) return f_one();
  unsigned e = n < 0 ? static_cast<unsigned>(-(long long)n)
                     : static_cast<unsigned>(n);
  if (n < 0) {
    if (p_is_zero(a->num))
      throw EvalDomainError("zero raised to a negative power");
    return make(p_pow(a->den, e), p_pow(a->num, e));
  }
  return make(p_pow(a->num, e), p_pow(a->den, e));
}

FormPtr f_scale(const FormPtr& a, const Rational& c) {
  if (c == 0 || p_is_zero(a->num)) return f_zero();
  return make(p_scale(a->num, c), a->den);
}

bool f_is_zero(const FormPtr& a) { return p_is_zero(a->num); }

bool f_is_one(const FormPtr& a) {
  auto c = f_as_const(a);
  return c && *c == 1;
}

std::optional<Rational> f_as_const(const FormPtr& a) {
  auto n = p_as_const(a->num);
  auto d = p_as_const(a->den);
  if (n && d) return *n / *d;
  return std::nullopt;
}

// ---- kernels ----------------------------------------------------------------

namespace {

bool lead_negative(const FormPtr& f) {
  if (p_is_zero(f->num)) return false;
  return f->num.rbegin()->second < 0;
}

}  // namespace

FormPtr make_kernel(Func fn, const FormPtr& arg) {
  if (fn == Func::Tan)
    return f_div(make_kernel(Func::Sin, arg), make_kernel(Func::Cos, arg));

  if (auto r = f_as_const(arg)) {
    switch (fn) {
      case Func::Sin:
      case Func::Arctan:
        if (*r == 0) return f_zero();
        break;
      case Func::Cos:
        if (*r == 0) return f_one();
        break;
      case Func::Exp:
        if (*r == 0) return f_one();
        break;
      case Func::Ln:
        if (*r == 1) return f_zero();
        if (*r <= 0)
          throw EvalDomainError("ln of a nonpositive constant");
        break;
      case Func::Sqrt: {
        if (*r < 0) throw EvalDomainError("sqrt of a negative constant");
        if (auto s = rational_sqrt(*r)) return f_const(*s);
        break;
      }
      default:
        break;
    }
  }

  FormPtr a = arg;
  bool negated = false;
  if (fn == Func::Sin || fn == Func::Arctan) {
    if (lead_negative(a)) {
      a = f_neg(a);
      negated = true;
    }
  } else if (fn == Func::Cos) {
    if (lead_negative(a)) a = f_neg(a);
  }

  FormPtr k = f_atom(atom_kernel(fn, a));
  return negated ? f_neg(k) : k;
}

// ---- analysis ----------------------------------------------------------------

static void collect_vars_poly(const Poly& p, VarSet& out) {
  for (const auto& [m, c] : p) {
    for (const auto& f : m.factors) {
      switch (f.atom->kind) {
        case AtomKind::CoordX:
          out.x = true;
          break;
        case AtomKind::CoordT:
          out.t = true;
          break;
        case AtomKind::JetZ:
          out.z.insert(f.atom->index);
          break;
        case AtomKind::JetW:
          out.w.insert(f.atom->index);
          break;
        case AtomKind::Param:
          out.params.insert(f.atom->name);
          break;
        case AtomKind::Kernel:
          collect_vars(*f.atom->arg, out);
          break;
      }
    }
  }
}

void collect_vars(const RatForm& f, VarSet& out) {
  collect_vars_poly(f.num, out);
  collect_vars_poly(f.den, out);
}

static FormPtr atom_derivative(const AtomPtr& a, const Var& v) {
  switch (a->kind) {
    case AtomKind::CoordX:
      return v.kind == Var::Kind::X ? f_one() : f_zero();
    case AtomKind::CoordT:
      return v.kind == Var::Kind::T ? f_one() : f_zero();
    case AtomKind::JetZ:
      return (v.kind == Var::Kind::Z && v.index == a->index) ? f_one()
                                                             : f_zero();
    case AtomKind::JetW:
      return (v.kind == Var::Kind::W && v.index == a->index) ? f_one()
                                                             : f_zero();
    case AtomKind::Param:
      return (v.kind == Var::Kind::Param && v.name == a->name) ? f_one()
                                                               : f_zero();
    case AtomKind::Kernel: {
      FormPtr darg = derivative(a->arg, v);
      if (f_is_zero(darg)) return f_zero();
      switch (a->func) {
        case Func::Sin:
          return f_mul(make_kernel(Func::Cos, a->arg), darg);
        case Func::Cos:
          return f_neg(f_mul(make_kernel(Func::Sin, a->arg), darg));
        case Func::Exp:
          return f_mul(f_atom(a), darg);
        case Func::Ln:
          return f_div(darg, a->arg);
        case Func::Sqrt:
          return f_div(darg, f_scale(f_atom(a), Rational(2)));
        case Func::Arctan:
          return f_div(darg, f_add(f_one(), f_mul(a->arg, a->arg)));
        default:
          throw Error("cannot differentiate kernel");
      }
    }
  }
  return f_zero();
}

static FormPtr poly_derivative(const Poly& p, const Var& v) {
  FormPtr acc = f_zero();
  for (const auto& [m, c] : p) {
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      const auto& f = m.factors[i];
      FormPtr da = atom_derivative(f.atom, v);
      if (f_is_zero(da)) continue;
      Monomial rest;
      for (std::size_t j = 0; j < m.factors.size(); ++j) {
        if (j == i) {
          if (m.factors[j].exp > 1)
            rest.factors.push_back({m.factors[j].atom, m.factors[j].exp - 1});
        } else {
          rest.factors.push_back(m.factors[j]);
        }
      }
      Poly rp;
      rp.emplace(std::move(rest), c * Rational(f.exp));
      acc = f_add(acc, f_mul(make(std::move(rp), p_one()), da));
    }
  }
  return acc;
}

FormPtr derivative(const FormPtr& f, const Var& v) {
  FormPtr dn = poly_derivative(f->num, v);
  if (p_as_const(f->den)) {
    // constant denominator: d(n/c) = n'/c
    return f_div(dn, make(Poly(f->den), p_one()));
  }
  FormPtr dd = poly_derivative(f->den, v);
  FormPtr n = lift(Poly(f->num));
  FormPtr d = lift(Poly(f->den));
  // (n' d - n d') / d^2
  return f_div(f_sub(f_mul(dn, d), f_mul(n, dd)), f_mul(d, d));
}

// ---- substitution -------------------------------------------------------------

FormPtr subst_atoms(const FormPtr& f, const AtomSubst& s, bool recurse_args) {
  auto apply_poly = [&](const Poly& p) -> FormPtr {
    FormPtr acc = f_zero();
    for (const auto& [m, c] : p) {
      FormPtr term = f_const(c);
      for (const auto& fac : m.factors) {
        FormPtr image;
        auto it = s.find(fac.atom);
        if (it != s.end()) {
          image = it->second;
        } else if (recurse_args && fac.atom->kind == AtomKind::Kernel) {
          FormPtr sub_arg = subst_atoms(fac.atom->arg, s, true);
          image = f_equal(sub_arg, fac.atom->arg)
                      ? f_atom(fac.atom)
                      : make_kernel(fac.atom->func, sub_arg);
        } else {
          image = f_atom(fac.atom);
        }
        term = f_mul(term, f_pow(image, fac.exp));
      }
      acc = f_add(acc, term);
    }
    return acc;
  };
  return f_div(apply_poly(f->num), apply_poly(f->den));
}

FormPtr subst_params(const FormPtr& f,
                     const std::map<std::string, FormPtr>& bindings) {
  if (bindings.empty()) return f;
  AtomSubst s;
  for (const auto& [name, value] : bindings)
    s.emplace(atom_var(Var::param(name)), value);
  return subst_atoms(f, s, true);
}

// ---- numeric evaluation --------------------------------------------------------

static double eval_poly(const Poly& p, const Env& env, const EvalGuards& g);

static double eval_atom(const Atom& a, const Env& env, const EvalGuards& g) {
  switch (a.kind) {
    case AtomKind::CoordX:
      return env.x;
    case AtomKind::CoordT:
      return env.t;
    case AtomKind::JetZ:
      return env.get(Var::z(a.index));
    case AtomKind::JetW:
      return env.get(Var::w(a.index));
    case AtomKind::Param: {
      auto it = env.params.find(a.name);
      if (it == env.params.end())
        throw EvalDomainError("unbound parameter '" + a.name + "'");
      return it->second;
    }
    case AtomKind::Kernel: {
      double v = eval(*a.arg, env, g);
      switch (a.func) {
        case Func::Sin:
          return std::sin(v);
        case Func::Cos:
          return std::cos(v);
        case Func::Exp:
          if (v > g.max_exp_arg) throw EvalDomainError("exp overflow");
          return std::exp(v);
        case Func::Ln:
          if (v <= g.min_ln_arg) throw EvalDomainError("ln domain");
          return std::log(v);
        case Func::Sqrt:
          if (v < g.min_sqrt_arg) throw EvalDomainError("sqrt domain");
          return std::sqrt(v);
        case Func::Arctan:
          return std::atan(v);
        default:
          throw Error("cannot evaluate kernel");
      }
    }
  }
  return 0;
}

static double eval_poly(const Poly& p, const Env& env, const EvalGuards& g) {
  double sum = 0;
  for (const auto& [m, c] : p) {
    double term = to_double(c);
    for (const auto& f : m.factors)
      term *= std::pow(eval_atom(*f.atom, env, g), f.exp);
    sum += term;
  }
  return sum;
}

double eval(const RatForm& f, const Env& env, const EvalGuards& g) {
  double den = eval_poly(f.den, env, g);
  if (std::abs(den) <= g.min_abs_den || den == 0)
    throw EvalDomainError("denominator too small");
  double num = eval_poly(f.num, env, g);
  return num / den;
}

// ---- half-angle rewrite ---------------------------------------------------------

namespace {

void collect_trig_args(const Poly& p, std::vector<FormPtr>& args) {
  for (const auto& [m, c] : p) {
    for (const auto& f : m.factors) {
      if (!is_trig_atom(*f.atom)) continue;
      bool seen = false;
      for (const auto& a : args)
        if (f_equal(a, f.atom->arg)) {
          seen = true;
          break;
        }
      if (!seen) args.push_back(f.atom->arg);
    }
  }
}

}  // namespace

FormPtr half_angle(const FormPtr& f) {
  FormPtr cur = f;
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<FormPtr> args;
    collect_trig_args(cur->num, args);
    collect_trig_args(cur->den, args);
    if (args.size() < 2) return cur;

    AtomSubst subst;
    for (const auto& full : args) {
      for (const auto& half : args) {
        if (full == half) continue;
        if (!f_is_zero(f_sub(full, f_scale(half, Rational(2))))) continue;
        FormPtr sh = make_kernel(Func::Sin, half);
        FormPtr ch = make_kernel(Func::Cos, half);
        subst.emplace(atom_kernel(Func::Sin, full),
                      f_scale(f_mul(sh, ch), Rational(2)));
        subst.emplace(atom_kernel(Func::Cos, full),
                      f_sub(f_one(), f_scale(f_mul(sh, sh), Rational(2))));
        break;
      }
    }
    if (subst.empty()) return cur;
    cur = subst_atoms(cur, subst, false);
  }
  return cur;
}

// ---- printing --------------------------------------------------------------------

namespace {

std::string atom_str(const Atom& a);

std::string mono_str(const Monomial& m, const Rational& coeff,
                     bool& lead_minus) {
  Rational c = coeff;
  lead_minus = c < 0;
  if (lead_minus) c = -c;
  std::vector<std::string> parts;
  if (c != 1 || m.factors.empty()) parts.push_back(pss::to_string(c));
  for (const auto& f : m.factors) {
    std::string s = atom_str(*f.atom);
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
    parts.push_back(std::move(s));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

std::string poly_str(const Poly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  // highest monomial first
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    bool neg = false;
    std::string term = mono_str(it->first, it->second, neg);
    if (first) {
      if (neg) out += "-";
      out += term;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

std::string atom_str(const Atom& a) {
  switch (a.kind) {
    case AtomKind::CoordX:
      return "x";
    case AtomKind::CoordT:
      return "t";
    case AtomKind::JetZ:
      return "z" + std::to_string(a.index);
    case AtomKind::JetW:
      return "w" + std::to_string(a.index);
    case AtomKind::Param:
      return a.name;
    case AtomKind::Kernel:
      return std::string(func_name(a.func)) + "(" + to_string(*a.arg) + ")";
  }
  return {};
}

bool needs_parens_as_den(const Poly& p) {
  if (p.size() != 1) return true;
  const auto& [m, c] = *p.begin();
  if (c != 1) return true;
  return m.factors.size() != 1;  // a single atom power binds tighter than '/'
}

bool single_product_term(const Poly& p) {
  if (p.size() != 1) return false;
  return p.begin()->second >= 0;
}

}  // namespace

std::string to_string(const RatForm& f) {
  if (p_is_zero(f.num)) return "0";
  if (p_as_const(f.den) && *p_as_const(f.den) == 1) return poly_str(f.num);
  std::string lhs = single_product_term(f.num) ? poly_str(f.num)
                                               : "(" + poly_str(f.num) + ")";
  std::string rhs = needs_parens_as_den(f.den) ? "(" + poly_str(f.den) + ")"
                                               : poly_str(f.den);
  return lhs + "/" + rhs;
}

}  // namespace pss::detail
