#pragma once

#include "pss/expr.hpp"

namespace pss {

/// Coefficients of the associated 1-forms, w^i = f_i1 dx + f_i2 dt.
struct OneFormTriple {
  Expr f11, f12, f21, f22, f31, f32;

  /// Coefficient of w^1 ^ w^2 on dx ^ dt; not identically zero for a valid
  /// problem.
  Expr wedge() const { return f11 * f22 - f21 * f12; }
};

/// Second fundamental form coefficients: w3_1 = a w^1 + b w^2,
/// w3_2 = b w^1 + c w^2.
struct SecondFundamentalForm {
  Expr a, b, c;
};

struct DeltaTriple {
  Expr d12, d13, d23;
};

}  // namespace pss
