#include <doctest.h>

#include <random>

#include "pss/equation.hpp"
#include "pss/errors.hpp"
#include "pss/zero.hpp"

using namespace pss;

namespace {

Expr Z(int i) { return Expr::z(i); }
Expr C(long long n, long long d = 1) { return Expr::rational(n, d); }
Expr sin_(const Expr& e) { return Expr::apply(Func::Sin, e); }
Expr cos_(const Expr& e) { return Expr::apply(Func::Cos, e); }

EquationDef sine_gordon() { return EquationDef::hyperbolic(sin_(Z(0))); }

EquationDef heat_like() {
  // u_t = z2, a second-order evolution equation
  return EquationDef::evolution(Z(2));
}

/// Random expressions over the scheme's variables, depth-bounded.
Expr random_expr(std::mt19937_64& rng, Scheme scheme, int max_jet,
                 int depth = 0) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (depth >= 3) {
    switch (pick(3)) {
      case 0:
        return Z(pick(max_jet + 1));
      case 1:
        return C(pick(7) - 3, pick(3) + 1);
      default:
        return scheme == Scheme::Hyperbolic && pick(2) ? Expr::w(1)
                                                       : Z(pick(max_jet + 1));
    }
  }
  switch (pick(6)) {
    case 0:
      return random_expr(rng, scheme, max_jet, depth + 1) +
             random_expr(rng, scheme, max_jet, depth + 1);
    case 1:
      return random_expr(rng, scheme, max_jet, depth + 1) *
             random_expr(rng, scheme, max_jet, depth + 1);
    case 2:
      return sin_(Z(pick(std::max(max_jet, 1))));
    case 3:
      return cos_(Z(pick(std::max(max_jet, 1))));
    case 4:
      return random_expr(rng, scheme, max_jet, depth + 1) -
             random_expr(rng, scheme, max_jet, depth + 1);
    default:
      return Z(pick(max_jet + 1)) * C(pick(5) + 1);
  }
}

}  // namespace

TEST_CASE("evolution total derivatives") {
  EquationDef eq = heat_like();
  CHECK(eq.order() == 2);
  CHECK(eq.total_x(Z(0)) == Z(1));
  CHECK(eq.total_x(sin_(Z(0))) == Z(1) * cos_(Z(0)));
  CHECK(eq.total_t(Z(0)) == Z(2));
  CHECK(eq.total_t(Z(1)) == Z(3));  // D_t z1 = D_x F
  CHECK(eq.dx_rhs(1) == Z(3));
}

TEST_CASE("hyperbolic total derivatives close through F") {
  EquationDef sg = sine_gordon();
  CHECK(sg.total_t(Z(1)) == sin_(Z(0)));
  CHECK(sg.total_t(Z(0)) == Expr::w(1));
  CHECK(sg.total_x(Expr::w(1)) == sin_(Z(0)));
  // D_x w2 = D_t F = cos(z0) w1
  CHECK(sg.total_x(Expr::w(2)) == cos_(Z(0)) * Expr::w(1));
  // D_t z2 = D_x(D_t z1) = z1 cos(z0)
  CHECK(sg.total_t(Z(2)) == Z(1) * cos_(Z(0)));
}

TEST_CASE("total_x of the sine-Gordon f22 equals its delta determinant") {
  EquationDef sg = sine_gordon();
  Expr eta = Expr::param("eta");
  Expr f22 = cos_(Z(0)) / eta;
  Expr d13 = -(Z(1) * sin_(Z(0)) / eta);  // f11 f32 - f31 f12 for the forms
  CHECK(sg.total_x(f22) == d13);
}

TEST_CASE("equation validation") {
  CHECK_THROWS_AS(EquationDef::evolution(Expr::param("c")), SchemeError);
  CHECK_THROWS_AS(EquationDef::evolution(Z(1) + Expr::w(1)), SchemeError);
  CHECK_THROWS_AS(EquationDef::evolution(Expr::x() * Z(1)), SchemeError);
  CHECK_THROWS_AS(EquationDef::hyperbolic(Z(2)), SchemeError);
  CHECK_THROWS_AS(EquationDef::hyperbolic(sin_(Z(0))).total_t(Z(30)),
                  OrderOverflowError);
  EquationDef eq = EquationDef::evolution(Z(4), /*max_order=*/8);
  CHECK_THROWS_AS(eq.total_t(Z(5)), OrderOverflowError);
  CHECK_THROWS_AS(eq.dx_rhs(9), OrderOverflowError);
}

TEST_CASE("w variables are rejected in the evolution scheme") {
  EquationDef eq = heat_like();
  CHECK_THROWS_AS(eq.total_x(Expr::w(1)), SchemeError);
  CHECK_THROWS_AS(eq.total_t(Expr::w(1)), SchemeError);
}

TEST_CASE("D_x and D_t commute modulo the equation") {
  std::mt19937_64 rng(42);
  SUBCASE("evolution") {
    EquationDef eq = heat_like();
    for (int trial = 0; trial < 25; ++trial) {
      Expr e = random_expr(rng, Scheme::Evolution, 3);
      Expr comm = eq.total_x(eq.total_t(e)) - eq.total_t(eq.total_x(e));
      CAPTURE(e.str());
      CHECK(is_zero(comm) != Verdict::NonZero);
    }
  }
  SUBCASE("hyperbolic") {
    EquationDef sg = sine_gordon();
    for (int trial = 0; trial < 25; ++trial) {
      Expr e = random_expr(rng, Scheme::Hyperbolic, 1);
      Expr comm = sg.total_x(sg.total_t(e)) - sg.total_t(sg.total_x(e));
      CAPTURE(e.str());
      CHECK(is_zero(comm) != Verdict::NonZero);
    }
  }
}

TEST_CASE("substitution of parameters commutes with total derivatives") {
  Expr m = Expr::param("m1");
  Expr F = Z(4) + m * Z(3);
  EquationDef eq = EquationDef::evolution(F);
  std::map<std::string, Expr> bind{{"m1", C(5, 3)}};
  EquationDef eq_bound = EquationDef::evolution(F.subst_params(bind));
  Expr e = m * sin_(Z(0)) * Z(2);
  CHECK(eq.total_x(e).subst_params(bind) == eq_bound.total_x(e.subst_params(bind)));
  CHECK(eq.total_t(e).subst_params(bind) == eq_bound.total_t(e.subst_params(bind)));
}
