#include "pss/verify.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

CheckResult run_zero_check(const std::string& name, const Expr& residual,
                           const ZeroOptions& opt, bool pass_on_zero = true) {
  auto start = Clock::now();
  CheckResult r;
  r.name = name;
  Witness w;
  r.verdict = is_zero(residual, opt, &w);
  r.residual = normalize(residual).str();
  if (r.verdict == Verdict::NonZero) r.witness = w;
  bool zeroish = r.verdict != Verdict::NonZero;
  r.passed = pass_on_zero ? zeroish : !zeroish;
  r.millis = elapsed_ms(start);
  return r;
}

}  // namespace

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.informational || c.passed;
  });
}

void Report::sort_canonical() {
  std::stable_sort(
      checks.begin(), checks.end(),
      [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string Report::text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& c : checks) {
    if (c.informational) {
      os << c.name << ": " << c.info << "\n";
      continue;
    }
    os << c.name << ": " << verdict_name(c.verdict)
       << (c.passed ? " [pass]" : " [FAIL]");
    if (!c.residual.empty() && c.residual != "0")
      os << "  residual = " << c.residual;
    if (c.witness) os << "  witness: " << c.witness->str();
    os << "  (" << c.millis << " ms)\n";
  }
  return os.str();
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << "\t";
    if (c.informational)
      os << c.info;
    else
      os << verdict_name(c.verdict);
    if (c.witness) os << "\t" << c.witness->str();
    os << "\n";
  }
  return os.str();
}

Report Report::merge(std::span<const Report> parts) {
  Report out;
  for (const auto& p : parts) out.append(p);
  out.sort_canonical();
  return out;
}

DeltaTriple delta(const OneFormTriple& f, const Expr& eta) {
  return DeltaTriple{
      normalize(f.f11 * f.f22 - eta * f.f12),
      normalize(f.f11 * f.f32 - f.f31 * f.f12),
      normalize(eta * f.f32 - f.f31 * f.f22),
  };
}

Report check_structure(const OneFormTriple& f, const EquationDef& eq,
                       const ZeroOptions& opt) {
  Expr d12 = f.f11 * f.f22 - f.f12 * f.f21;
  Expr d13 = f.f11 * f.f32 - f.f31 * f.f12;
  Expr d23 = f.f21 * f.f32 - f.f31 * f.f22;
  Report r;
  r.checks.push_back(run_zero_check(
      "structure.eq1", eq.total_t(f.f11) - eq.total_x(f.f12) - d23, opt));
  r.checks.push_back(run_zero_check(
      "structure.eq2", eq.total_x(f.f22) - eq.total_t(f.f21) - d13, opt));
  r.checks.push_back(run_zero_check(
      "structure.eq3", eq.total_t(f.f31) - eq.total_x(f.f32) + d12, opt));
  return r;
}

Report check_lemma_conditions(const OneFormTriple& f, const EquationDef& eq,
                              const Expr& eta, const ZeroOptions& opt) {
  if (eq.scheme() != Scheme::Evolution)
    throw SchemeError("the lemma conditions apply to evolution equations");
  int k = eq.order();
  Report r;

  auto z_free_from_1 = [&](const char* name, const Expr& e) {
    Expr sum_sq = Expr::rational(0);
    for (int i = 1; i <= k; ++i) {
      Expr d = e.partial(Var::z(i));
      sum_sq = sum_sq + d * d;
    }
    r.checks.push_back(
        run_zero_check(std::string("lemma.") + name + ".z-free", sum_sq, opt));
  };

  z_free_from_1("f11", f.f11);
  r.checks.push_back(run_zero_check("lemma.f21-eta", f.f21 - eta, opt));
  z_free_from_1("f31", f.f31);
  r.checks.push_back(
      run_zero_check("lemma.f12.zk-free", f.f12.partial(Var::z(k)), opt));
  Expr f22k = f.f22.partial(Var::z(k));
  Expr f22k1 = f.f22.partial(Var::z(k - 1));
  r.checks.push_back(run_zero_check("lemma.f22.zk-zk1-free",
                                    f22k * f22k + f22k1 * f22k1, opt));
  r.checks.push_back(
      run_zero_check("lemma.f32.zk-free", f.f32.partial(Var::z(k)), opt));

  Expr d11 = f.f11.partial(Var::z(0));
  Expr d31 = f.f31.partial(Var::z(0));
  r.checks.push_back(run_zero_check("lemma.f11z0-f31z0-nonzero",
                                    d11 * d11 + d31 * d31, opt,
                                    /*pass_on_zero=*/false));
  return r;
}

Report check_gauss(const SecondFundamentalForm& s, const ZeroOptions& opt) {
  Report r;
  r.checks.push_back(run_zero_check(
      "gauss", s.a * s.c - s.b * s.b + Expr::rational(1), opt));
  return r;
}

Report check_codazzi(const OneFormTriple& f, const EquationDef& eq,
                     const SecondFundamentalForm& s, const ZeroOptions& opt) {
  Expr d13 = f.f11 * f.f32 - f.f12 * f.f31;
  Expr d23 = f.f21 * f.f32 - f.f22 * f.f31;
  Expr two = Expr::rational(2);

  Expr r1 = f.f11 * eq.total_t(s.a) + f.f21 * eq.total_t(s.b) -
            f.f12 * eq.total_x(s.a) - f.f22 * eq.total_x(s.b) -
            two * s.b * d13 + (s.a - s.c) * d23;
  Expr r2 = f.f11 * eq.total_t(s.b) + f.f21 * eq.total_t(s.c) -
            f.f12 * eq.total_x(s.b) - f.f22 * eq.total_x(s.c) +
            (s.a - s.c) * d13 + two * s.b * d23;

  Report r;
  r.checks.push_back(run_zero_check("codazzi.eq1", r1, opt));
  r.checks.push_back(run_zero_check("codazzi.eq2", r2, opt));
  return r;
}

std::string UniversalityResult::describe() const {
  if (universal) return "universal";
  std::string out = "jet-dependent(l=";
  out += std::to_string(std::max(jet_order, 0));
  out += ")";
  return out;
}

UniversalityResult classify_universality(const SecondFundamentalForm& s) {
  VarSet vs;
  vs.merge(normalize(s.a).vars());
  vs.merge(normalize(s.b).vars());
  vs.merge(normalize(s.c).vars());
  UniversalityResult r;
  r.universal = !vs.has_jets();
  r.jet_order = vs.max_z();
  r.depends_w = !vs.w.empty();
  return r;
}

LinearProblem linear_problem(const OneFormTriple& f) {
  Expr half = Expr::rational(1, 2);
  LinearProblem lp;
  lp.mx = {{{half * f.f21, half * (f.f11 - f.f31)},
            {half * (f.f11 + f.f31), -(half * f.f21)}}};
  lp.mt = {{{half * f.f22, half * (f.f12 - f.f32)},
            {half * (f.f12 + f.f32), -(half * f.f22)}}};
  return lp;
}

std::array<std::array<Expr, 2>, 2> LinearProblem::zero_curvature_residual(
    const EquationDef& eq) const {
  std::array<std::array<Expr, 2>, 2> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Expr commutator = Expr::rational(0);
      for (int k = 0; k < 2; ++k)
        commutator = commutator + mx[i][k] * mt[k][j] - mt[i][k] * mx[k][j];
      out[i][j] =
          normalize(eq.total_t(mx[i][j]) - eq.total_x(mt[i][j]) + commutator);
    }
  }
  return out;
}

Report run_checks(const ProblemDef& p, const VerifyOptions& vo) {
  ZeroOptions zo;
  zo.seed = vo.seed;
  zo.constraints = p.constraints;

  std::set<std::string> want(vo.groups.begin(), vo.groups.end());
  auto selected = [&](const std::string& g) {
    return want.empty() || want.count(g) > 0;
  };

  static const std::set<std::string> known_groups = {
      "structure", "lemma", "gauss", "codazzi", "universality"};
  for (const auto& g : want)
    if (!known_groups.count(g)) throw Error("unknown check group '" + g + "'");

  bool lemma_applicable =
      p.equation.scheme() == Scheme::Evolution && p.spectral.has_value();
  if (want.count("lemma") && !lemma_applicable)
    throw SchemeError(
        "lemma checks need an evolution equation with a spectral parameter");
  if ((want.count("gauss") || want.count("codazzi") ||
       want.count("universality")) &&
      !p.sff)
    throw Error("the problem has no second fundamental form");

  Report report;
  if (selected("structure"))
    report.append(check_structure(p.forms, p.equation, zo));
  if (lemma_applicable && selected("lemma"))
    report.append(check_lemma_conditions(p.forms, p.equation, *p.spectral, zo));
  if (p.sff && selected("gauss")) report.append(check_gauss(*p.sff, zo));
  if (p.sff && selected("codazzi"))
    report.append(check_codazzi(p.forms, p.equation, *p.sff, zo));
  if (p.sff && selected("universality")) {
    CheckResult c;
    c.name = "universality";
    c.informational = true;
    c.info = classify_universality(*p.sff).describe();
    report.checks.push_back(c);
  }
  report.sort_canonical();
  return report;
}

}  // namespace pss
