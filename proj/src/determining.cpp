#include "fpsym/determining.hpp"

#include <algorithm>
#include <map>

namespace fpsym {

Ansatz Ansatz::point() {
  std::vector<std::string> args{"x", "t", "u"};
  return {{{"x", "xi", args}, {"t", "tau", args}, {"u", "eta", args}}};
}

Ansatz Ansatz::potential() {
  std::vector<std::string> args{"x", "t", "u", "v"};
  return {{{"x", "xi", args}, {"t", "tau", args}, {"u", "eta", args}, {"v", "phi", args}}};
}

namespace {

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

SymbolContext extend_with_ansatz(const SymbolContext& base, const Ansatz& ansatz) {
  SymbolContext ctx = base;
  for (const AnsatzEntry& e : ansatz.entries) ctx.function(e.func, e.args);
  return ctx;
}

// ---- constraint normalization --------------------------------------------

// Divides out atom powers common to every term (a nonzero monomial factor
// does not change the vanishing set) and rescales the leading rational
// coefficient to one. Parameter exponents are shifted so the minimum is
// zero, which also clears denominators.
Expr normalize_constraint(const Expr& e) {
  if (e.is_zero()) return e;
  const std::vector<Term>& ts = e.terms();

  std::map<Atom, int, bool (*)(const Atom&, const Atom&)> strip(
      [](const Atom& a, const Atom& b) { return compare(a, b) < 0; });
  for (const Factor& f : ts[0].factors) {
    if (f.atom.kind == AtomKind::func) continue; // unknowns are the subject
    int minp = f.power;
    for (std::size_t i = 1; i < ts.size() && minp != 0; ++i) {
      int p = 0;
      for (const Factor& g : ts[i].factors)
        if (g.atom == f.atom) p = g.power;
      if (f.atom.kind == AtomKind::param)
        minp = std::min(minp, p);
      else
        minp = (p >= 1) ? std::min(minp, p) : 0;
    }
    if (minp != 0) strip[f.atom] = minp;
  }

  std::vector<Term> out;
  for (const Term& t : ts) {
    Term nt;
    nt.coeff = t.coeff / ts[0].coeff;
    nt.factors = t.factors;
    for (Factor& f : nt.factors)
      if (auto it = strip.find(f.atom); it != strip.end()) f.power -= it->second;
    for (const auto& [atom, p] : strip) {
      bool present = std::any_of(t.factors.begin(), t.factors.end(),
                                 [&](const Factor& f) { return f.atom == atom; });
      if (!present) nt.factors.push_back({atom, -p}); // parameter with min < 0
    }
    out.push_back(std::move(nt));
  }
  return Expr::assemble(std::move(out));
}

// ---- zero rules ------------------------------------------------------------

struct ZeroRule {
  Atom proto; // unknown derivative that vanishes, with every higher index
};

bool rule_matches(const ZeroRule& r, const Atom& a) {
  return a.kind == AtomKind::func && a.name == r.proto.name && a.deriv.covers(r.proto.deriv);
}

Expr apply_zero_rules(const Expr& e, const std::vector<ZeroRule>& rules) {
  if (rules.empty()) return e;
  std::vector<Term> kept;
  for (const Term& t : e.terms()) {
    bool drop = false;
    for (const Factor& f : t.factors)
      for (const ZeroRule& r : rules)
        if (rule_matches(r, f.atom)) {
          drop = true;
          break;
        }
    if (!drop) kept.push_back(t);
  }
  return Expr::assemble(std::move(kept));
}

// A constraint whose every term carries the same single unknown derivative
// (power one) with polynomial cofactors forces that derivative to vanish:
// the cofactor sum is nonzero somewhere, and the constraint holds pointwise.
std::optional<ZeroRule> as_zero_rule(const Expr& e) {
  if (e.is_zero()) return std::nullopt;
  const Atom* common = nullptr;
  for (const Term& t : e.terms()) {
    const Atom* mine = nullptr;
    for (const Factor& f : t.factors) {
      if (f.atom.kind != AtomKind::func) continue;
      if (mine || f.power != 1) return std::nullopt;
      mine = &f.atom;
    }
    if (!mine) return std::nullopt;
    if (common && !(*common == *mine)) return std::nullopt;
    common = mine;
  }
  return ZeroRule{*common};
}

struct Closure {
  std::vector<ZeroRule> rules;
  std::vector<Expr> members; // rule atoms plus residual constraints, deduplicated
};

// Returns true when the rule set actually grew stronger.
bool add_rule(std::vector<ZeroRule>& rules, ZeroRule r) {
  for (const ZeroRule& have : rules)
    if (have.proto.name == r.proto.name && r.proto.deriv.covers(have.proto.deriv))
      return false; // already implied
  std::erase_if(rules, [&](const ZeroRule& have) {
    return have.proto.name == r.proto.name && have.proto.deriv.covers(r.proto.deriv);
  });
  rules.push_back(std::move(r));
  return true;
}

Closure close_constraints(std::vector<Expr> cs) {
  Closure cl;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Expr> next;
    for (const Expr& c : cs) {
      Expr r = normalize_constraint(apply_zero_rules(c, cl.rules));
      if (r.is_zero()) continue;
      if (auto rule = as_zero_rule(r)) {
        if (add_rule(cl.rules, std::move(*rule))) changed = true;
        continue;
      }
      next.push_back(std::move(r));
    }
    cs = std::move(next);
  }

  for (const ZeroRule& r : cl.rules) cl.members.push_back(Expr::from_atom(r.proto));
  cl.members.insert(cl.members.end(), cs.begin(), cs.end());
  std::sort(cl.members.begin(), cl.members.end(), ExprLess{});
  cl.members.erase(std::unique(cl.members.begin(), cl.members.end()), cl.members.end());
  return cl;
}

// ---- monomial collection ----------------------------------------------------

std::vector<std::pair<Expr, Expr>> collect_by_jets(const Expr& residual) {
  std::map<Expr, Expr, ExprLess> buckets;
  for (const Term& t : residual.terms()) {
    std::vector<Factor> key, rest;
    for (const Factor& f : t.factors) {
      if (f.atom.kind == AtomKind::jet && f.atom.deriv.order() >= 1) {
        key.push_back(f);
      } else {
        if (f.atom.kind == AtomKind::exponential && f.atom.exp_arg->jet_order() >= 1)
          throw Error(Error::Kind::domain,
                      "residual is not polynomial in the jet coordinates");
        rest.push_back(f);
      }
    }
    Expr k = Expr::assemble({Term{Rational(1), std::move(key)}});
    Expr c = Expr::assemble({Term{t.coeff, std::move(rest)}});
    buckets[k] = buckets[k] + c;
  }
  std::vector<std::pair<Expr, Expr>> out;
  for (auto& [k, c] : buckets)
    if (!c.is_zero()) out.emplace_back(k, c);
  return out;
}

} // namespace

DeterminingSystem derive_determining(const PDESystem& sys, const Ansatz& ansatz, int order) {
  int sys_order = -1;
  for (const Equation& eq : sys.equations) sys_order = std::max(sys_order, eq.delta.jet_order());
  if (order < sys_order)
    throw Error(Error::Kind::order, "prolongation order below the order of the system");

  JetContext ext{extend_with_ansatz(sys.ctx.syms, ansatz), sys.ctx.max_order};
  std::map<std::string, Expr> coeffs;
  for (const AnsatzEntry& e : ansatz.entries)
    coeffs[e.var] = Expr::from_atom(Atom::func(e.func, e.args));
  VectorField generic(ext, coeffs);
  ProlongedField p = prolong(generic, order);

  DeterminingSystem ds;
  ds.ctx = ext.syms;
  std::vector<Expr> candidates;
  for (const Equation& eq : sys.equations) {
    Expr r = on_shell_reduce(p.apply(eq.delta), sys);
    CollectedResidual cr{r, collect_by_jets(r)};
    for (const auto& [k, c] : cr.collected) candidates.push_back(c);
    ds.per_equation.push_back(std::move(cr));
  }

  Closure cl = close_constraints(std::move(candidates));
  ds.constraints = cl.members;
  return ds;
}

std::vector<Expr> constraints_at(const DeterminingSystem& ds, const Ansatz& ansatz,
                                 const VectorField& v) {
  Bindings b;
  for (const AnsatzEntry& e : ansatz.entries) {
    const JetContext& vctx = v.context();
    Expr coeff = vctx.syms.is_independent(e.var) ? v.xi(e.var) : v.eta(e.var);
    b.func(e.func, coeff);
  }
  std::vector<Expr> out;
  for (const Expr& c : ds.constraints) out.push_back(substitute(c, b, ds.ctx));
  return out;
}

VerificationReport verify_generator(const VectorField& v, const PDESystem& sys, int order,
                                    const std::vector<FormalRule>& formal_rules) {
  ProlongedField p = prolong(v, order);
  VerificationReport rep;
  rep.pass = true;
  for (const Equation& eq : sys.equations) {
    Expr r = on_shell_reduce(p.apply(eq.delta), sys);
    if (!formal_rules.empty()) r = rewrite_modulo(r, formal_rules, v.context().syms);
    if (!r.is_zero()) {
      if (r.in_canonical_class()) {
        rep.pass = false;
      } else {
        EqualityResult eq_res = equal(r, Expr(), v.context().syms);
        rep.numeric_fallback = true;
        rep.conclusive = rep.conclusive && eq_res.conclusive;
        rep.pass = rep.pass && eq_res.equal;
      }
    }
    rep.residuals.push_back(std::move(r));
  }
  return rep;
}

// ---- membership -------------------------------------------------------------

namespace {

std::vector<Atom> closure_directions(const SymbolContext& ctx) {
  std::vector<Atom> dirs;
  for (const std::string& n : ctx.independents()) dirs.push_back(Atom::coord(n));
  for (const std::string& n : ctx.dependents()) dirs.push_back(Atom::jet(n));
  return dirs;
}

std::vector<Expr> base_monomials(const SymbolContext& ctx, int degree) {
  std::vector<Expr> vars;
  for (const Atom& d : closure_directions(ctx)) vars.push_back(Expr::from_atom(d));
  std::vector<Expr> out{Expr::from_int(1)};
  std::vector<Expr> frontier{Expr::from_int(1)};
  for (int d = 0; d < degree; ++d) {
    std::vector<Expr> next;
    for (const Expr& m : frontier)
      for (const Expr& v : vars) {
        Expr e = m * v;
        if (std::none_of(next.begin(), next.end(), [&](const Expr& o) { return o == e; }))
          next.push_back(e);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), ExprLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Side {
  Closure closure;
  std::vector<Expr> span_rows;
};

Side augment(std::vector<Expr> base, const SymbolContext& ctx, const MembershipOptions& opt) {
  Side side;
  side.closure = close_constraints(std::move(base));
  std::vector<Atom> dirs = closure_directions(ctx);
  for (int round = 0; round < opt.differentiation_rounds; ++round) {
    std::vector<Expr> candidates = side.closure.members;
    for (const Expr& m : side.closure.members)
      for (const Atom& d : dirs) {
        Expr dm = diff(m, d);
        if (!dm.is_zero()) candidates.push_back(dm);
      }
    side.closure = close_constraints(std::move(candidates));
  }
  std::vector<Expr> monomials = base_monomials(ctx, opt.multiplier_degree);
  for (const Expr& m : side.closure.members)
    for (const Expr& mult : monomials) side.span_rows.push_back(mult * m);
  return side;
}

// Splits an expression into (non-parameter monomial -> parameter coefficient).
std::map<Expr, Expr, ExprLess> decompose(const Expr& e) {
  std::map<Expr, Expr, ExprLess> out;
  for (const Term& t : e.terms()) {
    std::vector<Factor> key, coeff;
    for (const Factor& f : t.factors)
      (f.atom.kind == AtomKind::param ? coeff : key).push_back(f);
    Expr k = Expr::assemble({Term{Rational(1), std::move(key)}});
    Expr c = Expr::assemble({Term{t.coeff, std::move(coeff)}});
    out[k] = out[k] + c;
  }
  return out;
}

bool is_nonlinear_in_unknowns(const Expr& e) {
  for (const Term& t : e.terms()) {
    int func_degree = 0;
    for (const Factor& f : t.factors)
      if (f.atom.kind == AtomKind::func) func_degree += f.power;
    if (func_degree > 1) return true;
  }
  return false;
}

std::vector<MembershipItem> contained_in(const std::vector<Expr>& queries, const Side& side) {
  // fixed column order over every row and query
  std::map<Expr, std::size_t, ExprLess> columns;
  auto note_columns = [&](const Expr& e) {
    for (const auto& [k, c] : decompose(e)) {
      (void)c;
      columns.emplace(k, columns.size());
    }
  };
  for (const Expr& r : side.span_rows) note_columns(r);
  std::vector<Expr> reduced;
  for (const Expr& q : queries) {
    Expr r = apply_zero_rules(q, side.closure.rules);
    note_columns(r);
    reduced.push_back(std::move(r));
  }

  auto to_row = [&](const Expr& e) {
    SparseRow row;
    for (const auto& [k, c] : decompose(e)) row[columns.at(k)] = c;
    return row;
  };

  // small rows first keeps the elimination basis sparse
  std::vector<Expr> rows = side.span_rows;
  std::stable_sort(rows.begin(), rows.end(), [](const Expr& a, const Expr& b) {
    return a.terms().size() < b.terms().size();
  });
  RowSpace space;
  for (const Expr& r : rows) space.insert(to_row(r));

  std::vector<MembershipItem> items;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    MembershipItem item{queries[i], Containment::not_shown};
    if (is_nonlinear_in_unknowns(queries[i])) {
      item.status = Containment::inconclusive;
    } else if (reduced[i].is_zero() || space.contains(to_row(reduced[i]))) {
      item.status = Containment::contained;
    }
    items.push_back(std::move(item));
  }
  return items;
}

} // namespace

bool MembershipReport::mutual() const {
  auto ok = [](const std::vector<MembershipItem>& items) {
    return std::all_of(items.begin(), items.end(), [](const MembershipItem& i) {
      return i.status == Containment::contained;
    });
  };
  return ok(claimed_in_derived) && ok(derived_in_claimed);
}

MembershipReport check_membership(const std::vector<Expr>& claimed,
                                  const DeterminingSystem& derived,
                                  const MembershipOptions& opt) {
  MembershipReport rep;
  Side derived_side = augment(derived.constraints, derived.ctx, opt);
  Side claimed_side = augment(claimed, derived.ctx, opt);
  rep.claimed_in_derived = contained_in(claimed, derived_side);
  rep.derived_in_claimed = contained_in(derived.constraints, claimed_side);
  return rep;
}

} // namespace fpsym
