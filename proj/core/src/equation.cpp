#include "pss/equation.hpp"

#include <map>
#include <mutex>

#include "pss/errors.hpp"

namespace pss {

const char* scheme_name(Scheme s) {
  return s == Scheme::Evolution ? "evolution" : "hyperbolic";
}

struct EquationDef::Impl {
  Scheme scheme;
  int order = 0;
  Expr rhs;
  int max_order = 12;

  mutable std::mutex mu;
  mutable std::map<int, Expr> dx_rhs_cache;  // evolution: D_x^i F
  mutable std::map<int, Expr> dt_z_cache;    // hyperbolic: D_t z_i
  mutable std::map<int, Expr> dx_w_cache;    // hyperbolic: D_x w_j

  Expr dx_rhs(int i) const;
  Expr dt_z(int i) const;
  Expr dx_w(int j) const;
  Expr total_x(const Expr& e) const;
  Expr total_t(const Expr& e) const;
};

EquationDef::EquationDef(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

EquationDef EquationDef::evolution(const Expr& rhs, int max_order) {
  VarSet vs = rhs.vars();
  if (vs.x || vs.t)
    throw SchemeError("evolution right-hand side must not depend on x or t");
  if (!vs.w.empty())
    throw SchemeError("evolution right-hand side must not use w variables");
  int k = vs.max_z();
  if (k < 0)
    throw SchemeError("evolution right-hand side must depend on a jet variable");
  if (rhs.partial(Var::z(k)).is_literal_zero())
    throw SchemeError("evolution right-hand side has vanishing top-order coefficient");
  if (k > max_order)
    throw OrderOverflowError("equation order exceeds the configured maximum");
  auto impl = std::make_shared<Impl>();
  impl->scheme = Scheme::Evolution;
  impl->order = k;
  impl->rhs = rhs;
  impl->max_order = max_order;
  return EquationDef(impl);
}

EquationDef EquationDef::hyperbolic(const Expr& rhs, int max_order) {
  VarSet vs = rhs.vars();
  if (vs.x || vs.t)
    throw SchemeError("hyperbolic right-hand side must not depend on x or t");
  if (vs.max_z() > 1 || vs.max_w() > 1)
    throw SchemeError(
        "hyperbolic right-hand side may depend on z0, z1 and w1 only");
  auto impl = std::make_shared<Impl>();
  impl->scheme = Scheme::Hyperbolic;
  impl->order = 1;
  impl->rhs = rhs;
  impl->max_order = max_order;
  return EquationDef(impl);
}

Scheme EquationDef::scheme() const { return impl_->scheme; }
int EquationDef::order() const { return impl_->order; }
const Expr& EquationDef::rhs() const { return impl_->rhs; }
int EquationDef::max_order() const { return impl_->max_order; }

Expr EquationDef::Impl::dx_rhs(int i) const {
  if (i == 0) return rhs;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = dx_rhs_cache.find(i);
    if (it != dx_rhs_cache.end()) return it->second;
  }
  Expr value = total_x(dx_rhs(i - 1));
  std::lock_guard<std::mutex> lock(mu);
  return dx_rhs_cache.emplace(i, std::move(value)).first->second;
}

// D_t z_i in the hyperbolic scheme: every mixed derivative is eliminated
// through F, so D_t z_1 = F and D_t z_i = D_x (D_t z_{i-1}).
Expr EquationDef::Impl::dt_z(int i) const {
  if (i == 0) return Expr::w(1);
  if (i == 1) return rhs;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = dt_z_cache.find(i);
    if (it != dt_z_cache.end()) return it->second;
  }
  Expr value = total_x(dt_z(i - 1));
  std::lock_guard<std::mutex> lock(mu);
  return dt_z_cache.emplace(i, std::move(value)).first->second;
}

// D_x w_j in the hyperbolic scheme: D_x w_1 = F, D_x w_j = D_t (D_x w_{j-1}).
Expr EquationDef::Impl::dx_w(int j) const {
  if (j == 1) return rhs;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = dx_w_cache.find(j);
    if (it != dx_w_cache.end()) return it->second;
  }
  Expr value = total_t(dx_w(j - 1));
  std::lock_guard<std::mutex> lock(mu);
  return dx_w_cache.emplace(j, std::move(value)).first->second;
}

Expr EquationDef::Impl::total_x(const Expr& e) const {
  VarSet vs = e.vars();
  if (scheme == Scheme::Evolution && !vs.w.empty())
    throw SchemeError("w variables are not part of the evolution scheme");
  if (vs.max_z() + 1 > max_order || vs.max_w() > max_order)
    throw OrderOverflowError("total x-derivative exceeds jet order " +
                             std::to_string(max_order));
  Expr out = e.partial(Var::x());
  for (int i : vs.z) out = out + e.partial(Var::z(i)) * Expr::z(i + 1);
  if (scheme == Scheme::Hyperbolic)
    for (int j : vs.w) out = out + e.partial(Var::w(j)) * dx_w(j);
  return out;
}

Expr EquationDef::Impl::total_t(const Expr& e) const {
  VarSet vs = e.vars();
  Expr out = e.partial(Var::t());
  if (scheme == Scheme::Evolution) {
    if (!vs.w.empty())
      throw SchemeError("w variables are not part of the evolution scheme");
    if (vs.max_z() + order > max_order)
      throw OrderOverflowError("total t-derivative exceeds jet order " +
                               std::to_string(max_order));
    for (int i : vs.z) out = out + e.partial(Var::z(i)) * dx_rhs(i);
  } else {
    if (vs.max_w() + 1 > max_order || vs.max_z() + order > max_order)
      throw OrderOverflowError("total t-derivative exceeds jet order " +
                               std::to_string(max_order));
    for (int i : vs.z) out = out + e.partial(Var::z(i)) * dt_z(i);
    for (int j : vs.w) out = out + e.partial(Var::w(j)) * Expr::w(j + 1);
  }
  return out;
}

Expr EquationDef::dx_rhs(int i) const {
  if (impl_->scheme != Scheme::Evolution)
    throw SchemeError("prolongations D_x^i F exist in the evolution scheme");
  if (i < 0 || impl_->order + i > impl_->max_order)
    throw OrderOverflowError("prolongation exceeds jet order " +
                             std::to_string(impl_->max_order));
  return impl_->dx_rhs(i);
}

Expr EquationDef::total_x(const Expr& e) const {
  return normalize(impl_->total_x(e));
}

Expr EquationDef::total_t(const Expr& e) const {
  return normalize(impl_->total_t(e));
}

}  // namespace pss
