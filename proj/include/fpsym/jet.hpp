// Jet-space bookkeeping: total derivatives, vector fields on the base
// space, prolongation via the characteristic recursion, and Lie brackets.
#pragma once

#include "fpsym/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace fpsym {

struct JetContext {
  SymbolContext syms;
  int max_order = 6;
};

// All derivative multi-indices over the independent variables with
// 1 <= order <= n, in a deterministic order.
std::vector<DerivIndex> multi_indices(const std::vector<std::string>& independents, int n);

// D_iv e = de/d iv + sum over jet atoms u_J of e: u_{J,iv} * de/du_J.
// Fails when e already carries jets of the context's maximum order.
Expr total_derivative(const Expr& e, const std::string& iv, const JetContext& ctx);

// Infinitesimal generator on the base space: one xi per independent
// variable, one eta per dependent variable, coefficients over base
// coordinates only (jet order <= 0).
class VectorField {
public:
  VectorField(JetContext ctx, const std::map<std::string, Expr>& coefficients);

  const Expr& xi(const std::string& independent) const;
  const Expr& eta(const std::string& dependent) const;
  const std::vector<Expr>& xis() const { return xi_; }
  const std::vector<Expr>& etas() const { return eta_; }

  // Derivation on base-space functions: V(f) = sum xi^i df/dx_i + sum eta^a df/du^a.
  Expr apply_base(const Expr& f) const;

  VectorField scaled(const Rational& c) const;
  friend VectorField operator+(const VectorField& a, const VectorField& b);
  bool operator==(const VectorField& o) const { return xi_ == o.xi_ && eta_ == o.eta_; }
  bool is_zero() const;

  const JetContext& context() const { return ctx_; }

private:
  JetContext ctx_;
  std::vector<Expr> xi_;
  std::vector<Expr> eta_;
};

// Q^a = eta^a - sum_i xi^i u^a_i, one entry per dependent variable.
std::vector<Expr> characteristic(const VectorField& v);

class ProlongedField {
public:
  ProlongedField(VectorField base, int order,
                 std::map<std::pair<std::string, DerivIndex>, Expr> coeffs);

  int order() const { return order_; }
  const VectorField& base() const { return base_; }

  // Coefficient of d/du^dep_J; order 0 gives eta^dep.
  const Expr& coefficient(const std::string& dep, const DerivIndex& J) const;
  const std::map<std::pair<std::string, DerivIndex>, Expr>& coefficients() const {
    return coeffs_;
  }

  // Directional derivative sum(xi^i de/dx_i) + sum(phi^a_J de/du^a_J).
  Expr apply(const Expr& e) const;

private:
  VectorField base_;
  int order_;
  std::map<std::pair<std::string, DerivIndex>, Expr> coeffs_; // includes order 0
};

// phi^a_J = D_J Q^a + sum_i xi^i u^a_{J,i} for every |J| <= n.
ProlongedField prolong(const VectorField& v, int n);

// Checks the characteristic recursion phi_{J,i} = D_i phi_J - sum_j (D_i xi^j) u^a_{J,j}
// on every stored coefficient; used as a construction audit by the tests.
bool audit_prolongation(const ProlongedField& p);

// [V,W] computed coefficient-wise as V(W-coefficients) - W(V-coefficients).
VectorField lie_bracket(const VectorField& v, const VectorField& w);

} // namespace fpsym
