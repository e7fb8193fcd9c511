#include "fpsym/fpe.hpp"

#include "fpsym/parse.hpp"

#include <algorithm>

namespace fpsym {

namespace {
Expr parse_free(const std::string& s, const JetContext& ctx) { return parse(s, ctx.syms); }
} // namespace

FpeParams FpeParams::numeric(const Rational& a1v, const Rational& a2v) {
  if (a2v == 0) throw Error(Error::Kind::config, "a2 must be nonzero");
  FpeParams p;
  p.a1 = Expr::from_rational(a1v);
  p.a2 = Expr::from_rational(a2v);
  return p;
}

bool FpeParams::is_numeric() const {
  return a1.as_rational().has_value() && a2.as_rational().has_value();
}

Expr drift(const FpeParams& p) {
  return p.a2 * Expr::from_atom(Atom::coord("x")) + p.a1;
}

PDESystem make_system(std::string id, JetContext ctx,
                      std::vector<std::pair<Expr, Atom>> equations) {
  PDESystem sys;
  sys.id = std::move(id);
  sys.ctx = std::move(ctx);
  for (auto& [delta, leading] : equations) {
    if (leading.kind != AtomKind::jet)
      throw Error(Error::Kind::domain, "leading coordinate must be a jet coordinate");
    for (const Equation& other : sys.equations)
      if (other.leading == leading)
        throw Error(Error::Kind::domain, "leading coordinates must be distinct");
    Expr coeff = diff(delta, leading);
    if (!coeff.is_invertible() || !diff(coeff, leading).is_zero())
      throw Error(Error::Kind::domain,
                  "leading coordinate " + leading.spelling() +
                      " must occur linearly with an invertible coefficient");
    Expr solved = Expr::from_atom(leading) - delta / coeff;
    if (solved.contains_atom(leading))
      throw Error(Error::Kind::domain, "equation cannot be solved for " + leading.spelling());
    sys.equations.push_back({delta, leading, solved});
  }
  return sys;
}

PDESystem fpe_system(const FpeParams& p) {
  JetContext ctx;
  ctx.syms.independent({"x", "t"}).dependent({"u"});
  Expr delta = parse_free("u_t", ctx) + p.a2 * parse_free("u", ctx) +
               drift(p) * parse_free("u_x", ctx) -
               Expr::from_rational(Rational(1, 2)) * parse_free("u_xx", ctx);
  return make_system("fpe", ctx, {{delta, Atom::jet("u", DerivIndex({"t"}))}});
}

PDESystem auxiliary_system(const FpeParams& p) {
  JetContext ctx;
  ctx.syms.independent({"x", "t"}).dependent({"u", "v"});
  Expr d1 = parse_free("v_t", ctx) + drift(p) * parse_free("u", ctx) -
            Expr::from_rational(Rational(1, 2)) * parse_free("u_x", ctx);
  Expr d2 = parse_free("v_x", ctx) - parse_free("u", ctx);
  return make_system("auxiliary", ctx,
                     {{d1, Atom::jet("v", DerivIndex({"t"}))},
                      {d2, Atom::jet("v", DerivIndex({"x"}))}});
}

std::pair<std::vector<Expr>, bool> jacobian_rank_check(const Equation& eq,
                                                       const std::vector<Atom>& coords) {
  std::vector<Expr> grad;
  bool constant_entry = false;
  for (const Atom& a : coords) {
    Expr g = diff(eq.delta, a);
    if (auto r = g.as_rational(); r && *r != 0) constant_entry = true;
    grad.push_back(std::move(g));
  }
  return {grad, constant_entry};
}

std::pair<std::vector<Expr>, bool> fpe_jacobian_rank_check(const FpeParams& p) {
  PDESystem sys = fpe_system(p);
  std::vector<Atom> coords{
      Atom::coord("x"),
      Atom::coord("t"),
      Atom::jet("u"),
      Atom::jet("u", DerivIndex({"x"})),
      Atom::jet("u", DerivIndex({"t"})),
      Atom::jet("u", DerivIndex({"x", "x"})),
      Atom::jet("u", DerivIndex({"x", "t"})),
      Atom::jet("u", DerivIndex({"t", "t"})),
  };
  return jacobian_rank_check(sys.equations[0], coords);
}

Expr on_shell_reduce(const Expr& e, const PDESystem& sys, int max_steps) {
  Expr cur = e;
  for (int step = 0; step < max_steps; ++step) {
    const Atom* atom = nullptr;
    const Equation* rule = nullptr;
    std::vector<Atom> atoms = cur.collect_atoms();
    for (const Atom& a : atoms) {
      if (a.kind != AtomKind::jet) continue;
      for (const Equation& eq : sys.equations) {
        if (a.name != eq.leading.name || !a.deriv.covers(eq.leading.deriv)) continue;
        if (!atom || a.deriv.order() > atom->deriv.order() ||
            (a.deriv.order() == atom->deriv.order() && compare(a, *atom) < 0)) {
          atom = &a;
          rule = &eq;
        }
        break; // earliest matching equation wins for this atom
      }
    }
    if (!atom) return cur;
    Expr repl = rule->solved;
    std::vector<std::string> dirs = atom->deriv.vars();
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    for (const std::string& iv : dirs) {
      int needed = atom->deriv.count(iv) - rule->leading.deriv.count(iv);
      for (int k = 0; k < needed; ++k) repl = total_derivative(repl, iv, sys.ctx);
    }
    cur = substitute_atom(cur, *atom, repl);
  }
  throw Error(Error::Kind::domain, "on-shell elimination did not terminate");
}

std::pair<Expr, Expr> conserved_form(const FpeParams& p) {
  PDESystem sys = fpe_system(p);
  Expr T = parse_free("u", sys.ctx);
  Expr X = -drift(p) * parse_free("u", sys.ctx) +
           Expr::from_rational(Rational(1, 2)) * parse_free("u_x", sys.ctx);
  // Sign-normalized audit: (T, X) is kept in the orientation the auxiliary
  // system uses (v_t = X, v_x = T), so the divergence matches Delta after
  // flipping the sign of one slot.
  Expr dT = total_derivative(T, "t", sys.ctx);
  Expr dX = total_derivative(X, "x", sys.ctx);
  const Expr& delta = sys.equations[0].delta;
  bool ok = false;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      if (Expr::from_int(s1) * dT + Expr::from_int(s2) * dX == delta) ok = true;
  if (!ok)
    throw Error(Error::Kind::domain, "conserved-form audit failed: D_t T + D_x X != +-Delta");
  return {T, X};
}

Expr fpe_residual(const Expr& sol, const FpeParams& p) {
  PDESystem sys = fpe_system(p);
  return bind_solution(sys.equations[0].delta, "u", sol, sys.ctx.syms);
}

} // namespace fpsym
