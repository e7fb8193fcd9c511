// Canonical symbolic expressions.
//
// The representation is a sum of terms; each term is an exact rational
// coefficient times a power product of atoms. Atoms are base coordinates,
// jet coordinates, formal function symbols, parameters, and exponentials of
// sub-expressions. Canonical form is maintained by construction: sums are
// flattened and sorted, like terms merged, exponentials multiplied into a
// single factor per term (exp(p)*exp(q) -> exp(p+q)), zero coefficients
// dropped, rational coefficients kept in lowest terms, and integer powers
// never 0 or (for the exponential) anything but 1.
//
// On the class {polynomial in coordinates / jet coordinates / function
// symbols with rational-in-parameter coefficients} x {exponentials of such
// polynomials} canonical forms are unique, so structural identity decides
// functional equality; `equal` falls back to seeded numeric sampling for
// anything outside that class.
//
// Negative powers are admitted for parameters and exponentials only; this
// is what makes coefficients like 1/(2*a2) representable while keeping
// equality decidable.
//
// Expressions are immutable values; all operations are pure.
#pragma once

#include "fpsym/rational.hpp"
#include "fpsym/symbols.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fpsym {

class Expr;

enum class AtomKind : unsigned char { coord, jet, func, param, exponential };

struct Atom {
  AtomKind kind{AtomKind::coord};
  std::string name;                   // coord/param symbol, jet dependent variable, func name
  DerivIndex deriv;                   // jet, func
  std::vector<std::string> args;      // func
  std::shared_ptr<const Expr> exp_arg; // exponential

  static Atom coord(std::string n);
  static Atom jet(std::string dep, DerivIndex d = {});
  static Atom func(std::string n, std::vector<std::string> args, DerivIndex d = {});
  static Atom param(std::string n);
  static Atom exponential(const Expr& arg);

  // Spelled name used for printing and for keying numeric evaluation
  // points: "x", "a2", "u_tx", "alpha_x".
  std::string spelling() const;
};

int compare(const Atom& a, const Atom& b);
bool operator==(const Atom& a, const Atom& b);

struct Factor {
  Atom atom;
  int power{1};
};

struct Term {
  Rational coeff;
  std::vector<Factor> factors; // sorted by atom, unique, at most one exponential (power 1, last)
};

// Orders terms by their power products (used for the canonical term order).
int compare_factors(const Term& a, const Term& b);

class Expr {
public:
  Expr() = default; // zero

  static Expr from_rational(Rational r);
  static Expr from_int(long long n) { return from_rational(Rational(n)); }
  static Expr from_atom(Atom a);
  static Expr exp(const Expr& arg);

  // Arithmetic; results are canonical.
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b); // divisor must be invertible
  Expr operator-() const;

  // Integer power. Negative exponents require an invertible base: a single
  // term whose atoms are parameters or exponentials.
  Expr pow(int k) const;

  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_rational() const;
  bool is_invertible() const;

  const std::vector<Term>& terms() const { return terms_; }

  // Maximum jet order of any jet atom occurring (also inside exponential
  // arguments); -1 when no jet atom occurs.
  int jet_order() const;

  bool contains_func(const std::string& name = {}) const;
  bool contains_exponential() const;
  bool contains_atom(const Atom& a) const;

  // Unique atoms occurring anywhere, including inside exponential arguments.
  std::vector<Atom> collect_atoms() const;

  // True if every exponential argument (recursively) is exponential-free,
  // i.e. the expression lies in the decidable canonical class.
  bool in_canonical_class() const;

  friend int compare(const Expr& a, const Expr& b);
  bool operator==(const Expr& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  // Internal: assembles a canonical expression from arbitrary terms.
  static Expr assemble(std::vector<Term> raw);

private:
  std::vector<Term> terms_;
};

// ---- calculus -------------------------------------------------------------

// Partial derivative with respect to an atom direction (coordinate, jet
// coordinate, or parameter). Distinct jet coordinates are independent;
// function symbols differentiate by extending their DerivIndex whenever the
// direction names one of their arguments.
Expr diff(const Expr& e, const Atom& v);

// ---- substitution ---------------------------------------------------------

// Simultaneous single-pass substitution. Function-symbol bindings replay
// derivative indices by differentiating the replacement; resolving the kind
// of each differentiation direction requires the context.
struct Bindings {
  std::map<std::string, Expr> coords;
  std::map<std::string, Expr> params;
  std::map<std::string, Expr> funcs;
  std::vector<std::pair<Atom, Expr>> jets; // exact jet atoms

  Bindings& coord(const std::string& n, Expr e) { coords.emplace(n, std::move(e)); return *this; }
  Bindings& param(const std::string& n, Expr e) { params.emplace(n, std::move(e)); return *this; }
  Bindings& func(const std::string& n, Expr e) { funcs.emplace(n, std::move(e)); return *this; }
  Bindings& jet(Atom a, Expr e) { jets.emplace_back(std::move(a), std::move(e)); return *this; }
};

Expr substitute(const Expr& e, const Bindings& b, const SymbolContext& ctx);

// Replaces one exact atom occurrence-wise (also inside exponential arguments).
Expr substitute_atom(const Expr& e, const Atom& a, const Expr& replacement);

// Replaces every jet coordinate of `dep` by the matching partial derivative
// of `sol`, a base-space expression: u -> sol, u_x -> d sol/dx, ...
Expr bind_solution(const Expr& e, const std::string& dep, const Expr& sol,
                   const SymbolContext& ctx);

// ---- formal-rule rewriting ------------------------------------------------

// Eliminates every derivative of `func` containing direction `dir` by the
// rule  d func/d dir = rhs,  differentiating the rule for mixed and higher
// indices. Elimination proceeds highest `dir`-count first and is bounded;
// exceeding the bound reports a cyclic rule set.
struct FormalRule {
  std::string func;
  std::string dir;
  Expr rhs;
};

Expr rewrite_modulo(const Expr& e, const std::vector<FormalRule>& rules,
                    const SymbolContext& ctx, int max_steps = 400);

// ---- equality and evaluation ----------------------------------------------

struct EqualityOptions {
  int samples = 20;
  double tol = 1e-9;
  unsigned long long seed = 20240501ull;
};

struct EqualityResult {
  bool equal = false;
  enum class Method { canonical, numeric } method = Method::canonical;
  bool conclusive = true;
  double max_rel_err = 0.0;
};

EqualityResult equal(const Expr& a, const Expr& b, const SymbolContext& ctx,
                     const EqualityOptions& opt = {});

// Floating evaluation; the point maps atom spellings ("x", "a2", "u_tx") to
// values. Function symbols must have been substituted away.
double eval(const Expr& e, const std::map<std::string, double>& point);

// ---- printing -------------------------------------------------------------

// Canonical text form; parse(to_string(e)) reproduces e structurally.
std::string to_string(const Expr& e);

} // namespace fpsym
