#pragma once

#include <memory>

#include "pss/expr.hpp"

namespace pss {

enum class Scheme : std::uint8_t { Evolution, Hyperbolic };

const char* scheme_name(Scheme s);

/// A PDE in reduced form together with its jet scheme.
///
/// Evolution scheme: u_t = F(z0 .. zk) with F_zk not identically zero; the
/// jet coordinates are (x, t, z0, z1, ...) and
///   D_x = d_x + sum z_{i+1} d_{z_i}
///   D_t = d_t + sum (D_x^i F) d_{z_i}.
///
/// Hyperbolic scheme: u_xt = F(z0[, z1, w1]); the coordinates are pure x- and
/// t-derivatives (z_i, w_j) and every mixed derivative is eliminated through
/// F:
///   D_x z_i = z_{i+1},  D_x w_1 = F,  D_x w_j = D_t(D_x w_{j-1})
///   D_t w_j = w_{j+1},  D_t z_0 = w_1, D_t z_1 = F, D_t z_i = D_x(D_t z_{i-1}).
class EquationDef {
 public:
  /// Order k is inferred as the highest jet in F.
  static EquationDef evolution(const Expr& rhs, int max_order = 12);
  static EquationDef hyperbolic(const Expr& rhs, int max_order = 12);

  Scheme scheme() const;
  int order() const;
  const Expr& rhs() const;
  int max_order() const;

  /// Cached total x-derivative prolongations D_x^i F (evolution scheme).
  Expr dx_rhs(int i) const;

  Expr total_x(const Expr& e) const;
  Expr total_t(const Expr& e) const;

 private:
  struct Impl;
  explicit EquationDef(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace pss
