#include "pss/parse.hpp"

#include <cctype>
#include <charconv>

#include "pss/errors.hpp"

namespace pss {

namespace {

bool all_same(std::string_view s, char c) {
  for (char ch : s)
    if (ch != c) return false;
  return !s.empty();
}

std::optional<int> parse_index(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  int value = 0;
  auto [p, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || p != digits.data() + digits.size())
    return std::nullopt;
  return value;
}

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  struct Token {
    enum class Kind {
      End,
      Number,
      Ident,
      Plus,
      Minus,
      Star,
      Slash,
      Caret,
      LParen,
      RParen
    } kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
  };

  Token next() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    auto single = [&](Token::Kind k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return t;
    };
    switch (c) {
      case '+':
        return single(Token::Kind::Plus);
      case '-':
        return single(Token::Kind::Minus);
      case '*':
        return single(Token::Kind::Star);
      case '/':
        return single(Token::Kind::Slash);
      case '^':
        return single(Token::Kind::Caret);
      case '(':
        return single(Token::Kind::LParen);
      case ')':
        return single(Token::Kind::RParen);
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Kind::Number;
      while (pos < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '.')) {
        t.text.push_back(src[pos]);
        advance();
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_')) {
        t.text.push_back(src[pos]);
        advance();
      }
      return t;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line,
                     col);
  }

 private:
  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
};

std::optional<Func> func_by_name(std::string_view name) {
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "tan") return Func::Tan;
  if (name == "exp") return Func::Exp;
  if (name == "ln") return Func::Ln;
  if (name == "log") return Func::Ln;
  if (name == "sqrt") return Func::Sqrt;
  if (name == "arctan") return Func::Arctan;
  if (name == "atan") return Func::Arctan;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, const SymbolContext& ctx)
      : lex_{src}, ctx_(ctx) {
    shift();
  }

  Expr parse() {
    Expr e = sum();
    expect(Lexer::Token::Kind::End, "end of input");
    return e;
  }

 private:
  using Token = Lexer::Token;
  Lexer lex_;
  Token cur_;
  const SymbolContext& ctx_;

  void shift() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("syntax error at line " + std::to_string(cur_.line) +
                         ", column " + std::to_string(cur_.col) + ": " + msg,
                     cur_.line, cur_.col);
  }

  void expect(Token::Kind k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    shift();
  }

  Expr sum() {
    Expr e = term();
    while (cur_.kind == Token::Kind::Plus ||
           cur_.kind == Token::Kind::Minus) {
      bool minus = cur_.kind == Token::Kind::Minus;
      shift();
      Expr rhs = term();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (cur_.kind == Token::Kind::Star ||
           cur_.kind == Token::Kind::Slash) {
      bool div = cur_.kind == Token::Kind::Slash;
      shift();
      Expr rhs = unary();
      if (div) {
        if (rhs.is_literal_zero()) fail("division by zero");
        e = e / rhs;
      } else {
        e = e * rhs;
      }
    }
    return e;
  }

  Expr unary() {
    if (cur_.kind == Token::Kind::Minus) {
      shift();
      return -unary();
    }
    if (cur_.kind == Token::Kind::Plus) {
      shift();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (cur_.kind != Token::Kind::Caret) return base;
    shift();
    bool neg = false;
    if (cur_.kind == Token::Kind::Minus) {
      neg = true;
      shift();
    }
    if (cur_.kind != Token::Kind::Number) fail("expected integer exponent");
    auto idx = parse_index(cur_.text);
    if (!idx) fail("expected integer exponent");
    shift();
    return base.pow(neg ? -*idx : *idx);
  }

  Expr primary() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        auto r = rational_from_decimal(cur_.text);
        if (!r) fail("malformed number '" + cur_.text + "'");
        shift();
        return Expr::rational(*r);
      }
      case Token::Kind::LParen: {
        shift();
        Expr e = sum();
        expect(Token::Kind::RParen, "')'");
        return e;
      }
      case Token::Kind::Ident: {
        std::string name = cur_.text;
        Token at = cur_;
        shift();
        if (cur_.kind == Token::Kind::LParen) {
          auto fn = func_by_name(name);
          if (!fn)
            throw ParseError("unknown function '" + name + "' at line " +
                                 std::to_string(at.line) + ", column " +
                                 std::to_string(at.col),
                             at.line, at.col);
          shift();
          Expr arg = sum();
          expect(Token::Kind::RParen, "')'");
          return Expr::apply(*fn, arg);
        }
        return identifier(name, at);
      }
      default:
        fail("expected expression");
    }
  }

  Expr identifier(const std::string& name, const Token& at) {
    if (auto v = resolve_builtin_name(name)) {
      if (v->kind == Var::Kind::Z || v->kind == Var::Kind::W)
        check_jet(*v, at);
      return Expr::var(*v);
    }
    auto it = ctx_.symbols.find(name);
    if (it != ctx_.symbols.end()) return it->second;
    if (func_by_name(name))
      throw ParseError("function '" + name + "' needs an argument at line " +
                           std::to_string(at.line) + ", column " +
                           std::to_string(at.col),
                       at.line, at.col);
    if (!ctx_.allow_unknown)
      throw ParseError("unknown identifier '" + name + "' at line " +
                           std::to_string(at.line) + ", column " +
                           std::to_string(at.col),
                       at.line, at.col);
    return Expr::param(name);
  }

  void check_jet(const Var& v, const Token& at) {
    auto reject = [&](const std::string& why) {
      throw ParseError(why + " at line " + std::to_string(at.line) +
                           ", column " + std::to_string(at.col),
                       at.line, at.col);
    };
    if (v.index > ctx_.max_jet)
      reject("jet variable " + v.str() + " exceeds maximum order " +
             std::to_string(ctx_.max_jet));
    if (!ctx_.scheme) return;
    if (*ctx_.scheme == Scheme::Evolution && v.kind == Var::Kind::W)
      reject("scheme mismatch: " + v.str() +
             " is not available in the evolution scheme");
    if (*ctx_.scheme == Scheme::Hyperbolic) {
      if ((v.kind == Var::Kind::Z && v.index > 1) ||
          (v.kind == Var::Kind::W && v.index > 1))
        reject("scheme mismatch: hyperbolic coefficients may use z0, z1 and "
               "w1 only, got " +
               v.str());
    }
  }
};

}  // namespace

std::optional<Var> resolve_builtin_name(std::string_view name) {
  if (name == "x") return Var::x();
  if (name == "t") return Var::t();
  if (name == "u") return Var::z(0);
  if (name.size() >= 2 && name[0] == 'u' && name[1] == '_') {
    std::string_view sub = name.substr(2);
    if (all_same(sub, 'x') && sub.size() <= 9)
      return Var::z(static_cast<int>(sub.size()));
    if (all_same(sub, 't') && sub.size() <= 9)
      return Var::w(static_cast<int>(sub.size()));
    if (sub == "xt" || sub == "tx") return std::nullopt;  // reserved
  }
  if (name.size() >= 2 && (name[0] == 'z' || name[0] == 'w')) {
    if (auto idx = parse_index(name.substr(1))) {
      if (name[0] == 'z' && *idx >= 0) return Var::z(*idx);
      if (name[0] == 'w' && *idx >= 1) return Var::w(*idx);
    }
  }
  return std::nullopt;
}

Expr parse_expr(std::string_view src) {
  SymbolContext ctx;
  return parse_expr(src, ctx);
}

Expr parse_expr(std::string_view src, const SymbolContext& ctx) {
  Parser p(src, ctx);
  return p.parse();
}

}  // namespace pss
