// Determining equations: mechanical derivation by monomial collection and
// verification of candidate generators against the symmetry criterion.
//
// Collection keys are the monomials in the positive-order jet coordinates
// that survive on-shell reduction. Order-0 jets (u, v) stay inside the
// collected coefficients: the unknowns have them as arguments, so splitting
// by them would impose conditions stronger than the symmetry criterion
// (u d/du annihilates the equation yet fails the split).
#pragma once

#include "fpsym/fpe.hpp"
#include "fpsym/linalg.hpp"

#include <string>
#include <vector>

namespace fpsym {

struct AnsatzEntry {
  std::string var;  // base variable whose coefficient this unknown is
  std::string func; // unknown function symbol
  std::vector<std::string> args;
};

// Base variables without an entry get coefficient zero.
struct Ansatz {
  std::vector<AnsatzEntry> entries;

  static Ansatz point();     // xi(x,t,u), tau(x,t,u), eta(x,t,u)
  static Ansatz potential(); // xi, tau, eta, phi over (x,t,u,v)
};

struct CollectedResidual {
  Expr residual;                                // on-shell reduced
  std::vector<std::pair<Expr, Expr>> collected; // (jet monomial key, coefficient)
};

struct DeterminingSystem {
  SymbolContext ctx; // system symbols extended by the ansatz unknowns
  std::vector<CollectedResidual> per_equation;
  // Normalized members: common monomial factors stripped, leading rational
  // coefficient 1, zero-rule propagation applied to fixpoint, duplicates and
  // subsumed members removed.
  std::vector<Expr> constraints;
};

DeterminingSystem derive_determining(const PDESystem& sys, const Ansatz& ansatz, int order);

// Substitutes concrete coefficient expressions for the ansatz unknowns in
// every constraint; a symmetry must annihilate all of them.
std::vector<Expr> constraints_at(const DeterminingSystem& ds, const Ansatz& ansatz,
                                 const VectorField& v);

struct VerificationReport {
  std::vector<Expr> residuals; // per equation, fully reduced
  bool pass = false;
  bool numeric_fallback = false; // some residual left the canonical class
  bool conclusive = true;
};

// apply(prolong(v, order), Delta), reduced on-shell and modulo the formal
// rules (alpha/beta satisfy their own equation); pass iff every residual is
// canonically zero, with a tagged numeric fallback outside the class.
VerificationReport verify_generator(const VectorField& v, const PDESystem& sys, int order,
                                    const std::vector<FormalRule>& formal_rules = {});

enum class Containment { contained, not_shown, inconclusive };

struct MembershipItem {
  Expr constraint;
  Containment status = Containment::not_shown;
};

struct MembershipReport {
  std::vector<MembershipItem> claimed_in_derived;
  std::vector<MembershipItem> derived_in_claimed;
  bool mutual() const;
};

struct MembershipOptions {
  int differentiation_rounds = 1; // consequence closure depth
  int multiplier_degree = 2;      // base-coordinate monomial multipliers in the span
};

// Two-sided span comparison. "contained" certifies a genuine consequence
// (zero-rule propagation, bounded differentiation, base-monomial multiples,
// exact linear span over the parameter field); "not_shown" means the bounded
// search found none, and nonlinear members are flagged inconclusive.
MembershipReport check_membership(const std::vector<Expr>& claimed,
                                  const DeterminingSystem& derived,
                                  const MembershipOptions& opt = {});

} // namespace fpsym
