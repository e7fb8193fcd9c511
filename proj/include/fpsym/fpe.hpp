// The drift-diffusion equation family under study, its auxiliary potential
// system, and on-shell reduction machinery.
//
// The governing equation is kept in the fixed orientation
//   Delta = u_t + a2*u + (a2*x + a1)*u_x - (1/2)*u_xx,
// so residuals and reports always share a sign convention.
#pragma once

#include "fpsym/jet.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fpsym {

struct FpeParams {
  Expr a1 = Expr::from_atom(Atom::param("a1"));
  Expr a2 = Expr::from_atom(Atom::param("a2"));

  static FpeParams symbolic() { return {}; }
  // a2 must be nonzero when bound numerically.
  static FpeParams numeric(const Rational& a1v, const Rational& a2v);
  bool is_numeric() const;
};

// a2*x + a1
Expr drift(const FpeParams& p);

struct Equation {
  Expr delta;
  Atom leading; // a jet coordinate occurring linearly with invertible coefficient
  Expr solved;  // leading = solved, free of the leading coordinate
};

struct PDESystem {
  std::string id;
  JetContext ctx;
  std::vector<Equation> equations;
};

// Validates linearity/invertibility of every leading coordinate and solves
// each equation for it.
PDESystem make_system(std::string id, JetContext ctx,
                      std::vector<std::pair<Expr, Atom>> equations);

// Delta = u_t + a2*u + (a2*x+a1)*u_x - u_xx/2, leading u_t.
PDESystem fpe_system(const FpeParams& p);

// v_t + (a2*x+a1)*u - u_x/2 = 0 (leading v_t) and v_x - u = 0 (leading v_x).
PDESystem auxiliary_system(const FpeParams& p);

// Gradient of the equation with respect to the given jet-space coordinates;
// the flag is true when some entry is a nonzero rational constant, which
// already forces rank one everywhere.
std::pair<std::vector<Expr>, bool> jacobian_rank_check(const Equation& eq,
                                                       const std::vector<Atom>& coords);

// The fixed coordinate list (x, t, u, u_x, u_t, u_xx, u_xt, u_tt).
std::pair<std::vector<Expr>, bool> fpe_jacobian_rank_check(const FpeParams& p);

// Eliminates every leading coordinate and its derivative consequences.
// Deterministic: the highest-order matching jet goes first, and an atom
// matched by several equations uses the earliest one (the auxiliary system
// lists its t-equation first, so mixed v-derivatives reduce through it).
Expr on_shell_reduce(const Expr& e, const PDESystem& sys, int max_steps = 200);

// (T, X) = (u, -(a2*x+a1)*u + u_x/2) with D_t T + D_x X = -Delta; the sign
// audit runs at construction and throws on violation.
std::pair<Expr, Expr> conserved_form(const FpeParams& p);

// Residual of Delta on a closed-form candidate u = sol(x,t).
Expr fpe_residual(const Expr& sol, const FpeParams& p);

} // namespace fpsym
