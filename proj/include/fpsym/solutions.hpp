// Solution factory: the five solution-generating operators, seed chains,
// the potential-symmetry candidate solutions, and exact residual checking
// including reduction modulo a formal solution's own equation.
//
// Claimed closed forms are ingested as unchecked records and earn their
// status from the checkers; variants re-derived mechanically are stored as
// separate records with their own provenance notes.
#pragma once

#include "fpsym/fpe.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fpsym {

enum class SolutionStatus { unchecked, symbolically_verified, numerically_verified, refuted };

std::string to_string(SolutionStatus s);

struct SolutionRecord {
  std::string id;
  Expr expression; // in (x,t) and parameters (a, b, c, lambda declared)
  std::string seed_id;
  std::vector<std::string> operators; // applied operator ids, in order
  SolutionStatus status = SolutionStatus::unchecked;
  std::string note;
};

struct SolutionOperator {
  std::string id; // F1..F5
  Expr rule;      // image expression in the formal symbol alpha(x,t)
};

// Symbols for solution expressions: x, t; parameters a, b, c, lambda;
// formal symbols alpha(x,t), q1(t), q2(t).
SymbolContext solution_context();

std::vector<SolutionOperator> solution_operators(const FpeParams& p);
const SolutionOperator& find_operator(const std::vector<SolutionOperator>& ops,
                                      const std::string& id);

// alpha(x,t) |-> image; derivative occurrences replay through the binding.
Expr transform(const SolutionOperator& op, const Expr& alpha_expr, const FpeParams& p);

// d alpha/dt = -a2 alpha - (a2 x + a1) alpha_x + alpha_xx / 2
FormalRule alpha_fpe_rule(const FpeParams& p);

// Eliminates every t-derivative of the rule's symbol (mixed ones via formal
// differentiation of the rule); the result carries only pure x-derivatives.
Expr reduce_modulo(const Expr& e, const FormalRule& rule);

// Residual of the governing equation on the record's expression; formal
// alpha occurrences are reduced modulo their equation first.
Expr exact_residual(const SolutionRecord& s, const FpeParams& p);

// Runs exact_residual and stamps symbolically_verified / refuted.
SolutionRecord check_exact(SolutionRecord s, const FpeParams& p);

// Successive operator images from a verified seed; each link is residual
// checked, a refuted link ends the chain (its record carries the residual).
std::vector<SolutionRecord> chain(const SolutionRecord& seed,
                                  const std::vector<std::string>& ops, const FpeParams& p);

// Claimed closed forms of the potential-symmetry branches plus re-derived
// variants, all unchecked. branch is "Y1" or "Y2"; the Y2 forms require
// a2 = 2.
std::vector<SolutionRecord> potential_candidates(const FpeParams& p, const std::string& branch);

// Mechanical derivation of the q1,q2 constraints from the Y1 ansatz
// u = (2 a2 x q1(t) + q2(t)) exp(a2 x^2 + 2 a1 x), with the claimed pair and
// a normalized comparison.
struct AnsatzConstraintReport {
  Expr ansatz;
  std::vector<Expr> derived; // coefficients of x^k, highest first
  std::vector<Expr> claimed;
  std::vector<bool> matched; // derived[i] ~ claimed[i] up to scale
};

AnsatzConstraintReport y1_ansatz_constraints(const FpeParams& p);

// Substitutes closed forms f(z), g(z) into the four z-equations of the
// invariant-solution branch at numeric a2 and reports which hold.
struct BranchConditionReport {
  std::vector<Expr> residuals; // four entries
  std::vector<bool> holds;
  bool all_hold() const;
};

BranchConditionReport branch_conditions_check(const Expr& fz, const Expr& gz,
                                              const FpeParams& p);

// z-power-law exponent a2/(a2-1) when it is an integer.
std::optional<int> power_law_exponent(const Rational& a2);

} // namespace fpsym
