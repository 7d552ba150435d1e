#include "pss/problem.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pss/errors.hpp"
#include "pss/parse.hpp"

namespace pss {

namespace {

struct Line {
  std::string text;
  int number = 0;
};

struct Entry {
  std::string key;
  std::string value;
  int number = 0;
  int value_col = 1;
  bool is_definition = false;  // `:=` instead of `=`
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& msg, int line, int col = 1) {
  throw ParseError(msg + " (line " + std::to_string(line) + ")", line, col);
}

Entry split_entry(const Line& line) {
  // `key := value` is a definition, `key = value` a plain entry. Operators
  // inside the value are unambiguous because keys are single identifiers.
  const std::string& s = line.text;
  std::size_t def = s.find(":=");
  std::size_t eq = s.find('=');
  Entry e;
  e.number = line.number;
  if (def != std::string::npos && (eq == std::string::npos || def <= eq)) {
    e.is_definition = true;
    e.key = std::string(trim(std::string_view(s).substr(0, def)));
    e.value = std::string(trim(std::string_view(s).substr(def + 2)));
    e.value_col = static_cast<int>(def) + 3;
  } else if (eq != std::string::npos && (eq + 1 >= s.size() || s[eq + 1] != '=')) {
    e.key = std::string(trim(std::string_view(s).substr(0, eq)));
    e.value = std::string(trim(std::string_view(s).substr(eq + 1)));
    e.value_col = static_cast<int>(eq) + 2;
  } else {
    fail("expected 'key = value'", line.number);
  }
  if (e.key.empty()) fail("missing key before '='", line.number);
  if (e.value.empty()) fail("missing value for '" + e.key + "'", line.number);
  return e;
}

Expr parse_value(const Entry& e, const SymbolContext& ctx) {
  try {
    return parse_expr(e.value, ctx);
  } catch (const ParseError& pe) {
    throw ParseError(std::string(pe.what()) + " (problem file line " +
                         std::to_string(e.number) + ")",
                     e.number, e.value_col + pe.col - 1);
  }
}

std::optional<Rational> parse_rational_literal(std::string_view text) {
  text = trim(text);
  bool neg = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    neg = text.front() == '-';
    text.remove_prefix(1);
    text = trim(text);
  }
  std::size_t slash = text.find('/');
  std::optional<Rational> r;
  if (slash == std::string_view::npos) {
    r = rational_from_decimal(text);
  } else {
    auto num = rational_from_decimal(trim(text.substr(0, slash)));
    auto den = rational_from_decimal(trim(text.substr(slash + 1)));
    if (num && den && *den != 0) r = *num / *den;
  }
  if (r && neg) r = -*r;
  return r;
}

}  // namespace

ProblemDef parse_problem(std::string_view src,
                         const std::map<std::string, Rational>& overrides) {
  // ---- split into sections --------------------------------------------------
  std::map<std::string, std::vector<Line>> sections;
  std::vector<Line> header;
  std::string current;
  bool version_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    std::size_t nl = src.find('\n', pos);
    std::string_view raw = src.substr(
        pos, nl == std::string_view::npos ? src.size() - pos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? src.size() + 1 : nl + 1;

    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view text = trim(raw);
    if (text.empty()) continue;

    if (!version_seen) {
      if (text != "pss-problem v1")
        fail("expected version header 'pss-problem v1'", line_no);
      version_seen = true;
      continue;
    }
    if (text.front() == '[') {
      if (text.back() != ']') fail("malformed section header", line_no);
      std::string name(trim(text.substr(1, text.size() - 2)));
      if (sections.count(name)) fail("duplicate section [" + name + "]", line_no);
      sections.emplace(name, std::vector<Line>{});
      current = name;
      continue;
    }
    Line line{std::string(text), line_no};
    if (current.empty())
      header.push_back(std::move(line));
    else
      sections[current].push_back(std::move(line));
  }
  if (!version_seen) fail("empty problem file", 1);

  static const std::set<std::string> known = {"equation", "params", "forms",
                                              "sff", "constraints"};
  for (const auto& [name, lines] : sections)
    if (!known.count(name))
      fail("unknown section [" + name + "]",
           lines.empty() ? 1 : lines.front().number);

  // ---- header: name -----------------------------------------------------------
  std::string problem_name;
  for (const auto& line : header) {
    Entry e = split_entry(line);
    if (e.key == "name")
      problem_name = e.value;
    else
      fail("unknown top-level entry '" + e.key + "'", e.number);
  }
  if (problem_name.empty()) fail("missing 'name = ...' entry", 1);

  // ---- scheme (needed before expressions are parsed) ---------------------------
  auto eq_it = sections.find("equation");
  if (eq_it == sections.end() || eq_it->second.empty())
    fail("missing equation", 1);

  std::optional<Scheme> scheme;
  std::optional<Entry> rhs_entry;
  std::optional<int> declared_order;
  for (const auto& line : eq_it->second) {
    Entry e = split_entry(line);
    if (e.key == "u_t") {
      if (rhs_entry) fail("duplicate equation line", e.number);
      scheme = Scheme::Evolution;
      rhs_entry = e;
    } else if (e.key == "u_xt" || e.key == "u_tx") {
      if (rhs_entry) fail("duplicate equation line", e.number);
      scheme = Scheme::Hyperbolic;
      rhs_entry = e;
    } else if (e.key == "scheme") {
      if (e.value == "evolution")
        scheme = scheme.value_or(Scheme::Evolution);
      else if (e.value == "hyperbolic")
        scheme = scheme.value_or(Scheme::Hyperbolic);
      else
        fail("unknown scheme '" + e.value + "'", e.number);
    } else if (e.key == "order") {
      auto r = parse_rational_literal(e.value);
      if (!r || denominator(*r) != 1 || *r <= 0)
        fail("order must be a positive integer", e.number);
      declared_order = static_cast<int>(numerator(*r).convert_to<long long>());
    } else {
      fail("unknown equation entry '" + e.key + "'", e.number);
    }
  }
  if (!rhs_entry) fail("missing equation", eq_it->second.front().number);

  // ---- params -------------------------------------------------------------------
  SymbolContext ctx;
  ctx.allow_unknown = false;
  ctx.scheme = scheme;
  std::map<std::string, ParamBinding> params;
  std::map<std::string, Rational> pending_overrides = overrides;

  if (auto it = sections.find("params"); it != sections.end()) {
    for (const auto& line : it->second) {
      Entry e = split_entry(line);
      if (resolve_builtin_name(e.key))
        fail("'" + e.key + "' is a reserved variable name", e.number);
      if (ctx.symbols.count(e.key))
        fail("duplicate parameter '" + e.key + "'", e.number);
      if (e.is_definition) {
        ctx.symbols.emplace(e.key, parse_value(e, ctx));
        continue;
      }
      ParamBinding binding;
      if (e.value == "free") {
        binding.free = true;
      } else {
        auto r = parse_rational_literal(e.value);
        if (!r)
          fail("parameter '" + e.key +
                   "' must be 'free', a rational literal, or use ':=' for a "
                   "definition",
               e.number);
        binding.free = false;
        binding.value = *r;
      }
      if (auto ov = pending_overrides.find(e.key);
          ov != pending_overrides.end()) {
        binding.free = false;
        binding.value = ov->second;
        pending_overrides.erase(ov);
      }
      params.emplace(e.key, binding);
      ctx.symbols.emplace(e.key, binding.free
                                     ? Expr::param(e.key)
                                     : Expr::rational(binding.value));
    }
  }
  if (!pending_overrides.empty())
    throw Error("parameter override for undeclared parameter '" +
                pending_overrides.begin()->first + "'");

  // ---- equation rhs ----------------------------------------------------------------
  Expr rhs = parse_value(*rhs_entry, ctx);
  std::optional<EquationDef> equation;
  try {
    equation = scheme == Scheme::Evolution ? EquationDef::evolution(rhs)
                                           : EquationDef::hyperbolic(rhs);
  } catch (const Error& err) {
    fail(std::string("invalid equation: ") + err.what(), rhs_entry->number);
  }
  if (declared_order && *declared_order != equation->order())
    fail("declared order " + std::to_string(*declared_order) +
             " does not match the equation (order " +
             std::to_string(equation->order()) + ")",
         rhs_entry->number);

  // ---- forms -------------------------------------------------------------------------
  auto forms_it = sections.find("forms");
  if (forms_it == sections.end()) fail("missing [forms] section", 1);
  std::map<std::string, Expr> coeff;
  std::optional<std::string> spectral_name;
  int spectral_line = 0;
  for (const auto& line : forms_it->second) {
    Entry e = split_entry(line);
    if (e.key == "spectral") {
      if (spectral_name) fail("duplicate 'spectral' entry", e.number);
      spectral_name = e.value;
      spectral_line = e.number;
      continue;
    }
    static const std::set<std::string> names = {"f11", "f12", "f21",
                                                "f22", "f31", "f32"};
    if (!names.count(e.key))
      fail("unknown form coefficient '" + e.key + "'", e.number);
    if (coeff.count(e.key))
      fail("duplicate coefficient '" + e.key + "'", e.number);
    coeff.emplace(e.key, parse_value(e, ctx));
  }
  for (const char* required : {"f11", "f12", "f21", "f22", "f31", "f32"})
    if (!coeff.count(required))
      fail(std::string("missing form coefficient '") + required + "'",
           forms_it->second.empty() ? 1 : forms_it->second.front().number);

  OneFormTriple forms{coeff.at("f11"), coeff.at("f12"), coeff.at("f21"),
                      coeff.at("f22"), coeff.at("f31"), coeff.at("f32")};
  if (normalize(forms.wedge()).is_literal_zero())
    fail("degenerate forms: f11*f22 - f21*f12 is identically zero",
         forms_it->second.front().number);

  std::optional<Expr> spectral;
  if (spectral_name) {
    if (*spectral_name != "f21")
      fail("the spectral coefficient must be f21", spectral_line);
    VarSet vs = forms.f21.vars();
    if (vs.x || vs.t || vs.has_jets())
      fail("spectral coefficient f21 must be constant in x, t and jets",
           spectral_line);
    spectral = forms.f21;
  }

  // ---- sff ------------------------------------------------------------------------------
  std::optional<SecondFundamentalForm> sff;
  if (auto it = sections.find("sff"); it != sections.end()) {
    std::map<std::string, Expr> abc;
    for (const auto& line : it->second) {
      Entry e = split_entry(line);
      if (e.key != "a" && e.key != "b" && e.key != "c")
        fail("unknown sff entry '" + e.key + "'", e.number);
      if (abc.count(e.key)) fail("duplicate sff entry '" + e.key + "'", e.number);
      abc.emplace(e.key, parse_value(e, ctx));
    }
    for (const char* required : {"a", "b", "c"})
      if (!abc.count(required))
        fail(std::string("missing sff entry '") + required + "'",
             it->second.empty() ? 1 : it->second.front().number);
    sff = SecondFundamentalForm{abc.at("a"), abc.at("b"), abc.at("c")};
  }

  // ---- constraints -----------------------------------------------------------------------
  std::vector<Constraint> constraints;
  if (auto it = sections.find("constraints"); it != sections.end()) {
    for (const auto& line : it->second) {
      const std::string& s = line.text;
      auto make_constraint = [&](std::size_t op_pos, std::size_t op_len,
                                 Constraint::Kind kind, bool flip) {
        std::string lhs(trim(std::string_view(s).substr(0, op_pos)));
        std::string rhs_text(trim(std::string_view(s).substr(op_pos + op_len)));
        Entry le{"constraint", lhs, line.number, 1, false};
        Entry re{"constraint", rhs_text, line.number,
                 static_cast<int>(op_pos + op_len) + 1, false};
        Expr diff = parse_value(le, ctx) - parse_value(re, ctx);
        constraints.push_back({flip ? -diff : diff, kind, s});
      };
      if (auto p = s.find("!="); p != std::string::npos)
        make_constraint(p, 2, Constraint::Kind::NonZero, false);
      else if (auto p2 = s.find(">"); p2 != std::string::npos)
        make_constraint(p2, 1, Constraint::Kind::Positive, false);
      else if (auto p3 = s.find("<"); p3 != std::string::npos)
        make_constraint(p3, 1, Constraint::Kind::Positive, true);
      else
        fail("constraint must use '!=', '>' or '<'", line.number);
    }
  }

  ProblemDef def{std::move(problem_name), std::move(*equation),
                 std::move(forms),        std::move(sff),
                 std::move(params),       std::move(constraints),
                 std::move(spectral)};
  return def;
}

}  // namespace pss
