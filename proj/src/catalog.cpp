#include "fpsym/catalog.hpp"

#include "fpsym/linalg.hpp"
#include "fpsym/parse.hpp"

#include <algorithm>
#include <map>

namespace fpsym {

namespace {

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

JetContext point_context() {
  JetContext ctx;
  ctx.syms.independent({"x", "t"}).dependent({"u"});
  ctx.syms.function("alpha", {"x", "t"});
  return ctx;
}

JetContext aux_context() {
  JetContext ctx;
  ctx.syms.independent({"x", "t"}).dependent({"u", "v"});
  ctx.syms.function("beta", {"x", "t"});
  return ctx;
}

Expr bind_params(const Expr& e, const FpeParams& p, const SymbolContext& ctx) {
  Bindings b;
  b.param("a1", p.a1).param("a2", p.a2);
  return substitute(e, b, ctx);
}

VectorField make_field(const JetContext& ctx, const FpeParams& p,
                       std::map<std::string, std::string> coeffs) {
  std::map<std::string, Expr> bound;
  for (const auto& [var, text] : coeffs)
    bound[var] = bind_params(parse(text, ctx.syms), p, ctx.syms);
  return VectorField(ctx, bound);
}

FormalRule alpha_rule(const JetContext& ctx, const FpeParams& p) {
  return {"alpha", "t",
          bind_params(parse("-a2*alpha(x,t) - (a2*x+a1)*alpha_x(x,t) + alpha_xx(x,t)/2",
                            ctx.syms),
                      p, ctx.syms)};
}

FormalRule beta_rule(const JetContext& ctx, const FpeParams& p) {
  return {"beta", "t",
          bind_params(parse("-(a2*x+a1)*beta_x(x,t) + beta_xx(x,t)/2", ctx.syms), p,
                      ctx.syms)};
}

} // namespace

Catalog load_catalog(const FpeParams& p) {
  Catalog c;
  c.params = p;
  c.fpe = fpe_system(p);
  c.aux = auxiliary_system(p);
  JetContext pc = point_context();
  JetContext ac = aux_context();

  auto add = [&](std::vector<GeneratorRecord>& out, const std::string& id,
                 const std::string& system_id, const std::string& label,
                 VectorField field, std::vector<FormalRule> rules, std::string note = {}) {
    const PDESystem& sys = system_id == "fpe" ? c.fpe : c.aux;
    GeneratorRecord rec{id, system_id, label, std::move(field), std::move(rules),
                        std::move(note)};
    auto rep = verify_generator(rec.field, sys, 2, rec.rules);
    if (!rep.pass) {
      std::string what = "catalog load: " + id + " fails verification;";
      for (const Expr& r : rep.residuals)
        if (!r.is_zero()) what += " residual " + to_string(r);
      throw Error(Error::Kind::domain, what);
    }
    out.push_back(std::move(rec));
  };

  add(c.point, "V1", "fpe", "x-translation scaled by exp(a2*t)",
      make_field(pc, p, {{"x", "exp(a2*t)"}}), {});
  add(c.point, "V2", "fpe", "scaling of u", make_field(pc, p, {{"u", "u"}}), {});
  add(c.point, "V3", "fpe", "x-translation scaled by exp(-a2*t) with u-correction",
      make_field(pc, p,
                 {{"x", "exp(-a2*t)/(2*a2)"}, {"u", "(a2*x+a1)*(u/a2)*exp(-a2*t)"}}),
      {});
  add(c.point, "V4", "fpe", "time translation", make_field(pc, p, {{"t", "1"}}), {});
  add(c.point, "V5", "fpe", "exp(-2a2t) projective generator",
      make_field(pc, p,
                 {{"x", "-(a2*x+a1)*exp(-2*a2*t)"},
                  {"t", "exp(-2*a2*t)"},
                  {"u", "-2*(a2*x+a1)^2*exp(-2*a2*t)*u"}}),
      {});
  add(c.point, "V6", "fpe", "exp(2a2t) projective generator",
      make_field(pc, p,
                 {{"x", "(a2*x+a1)*exp(2*a2*t)"},
                  {"t", "exp(2*a2*t)"},
                  {"u", "-a2*u*exp(2*a2*t)"}}),
      {});
  add(c.point, "Valpha", "fpe", "superposition by a solution alpha(x,t)",
      make_field(pc, p, {{"u", "alpha(x,t)"}}), {alpha_rule(pc, p)});

  add(c.potential, "W1", "auxiliary", "x-translation scaled by exp(a2*t)",
      make_field(ac, p, {{"x", "exp(a2*t)"}}), {});
  add(c.potential, "W2", "auxiliary", "scaling of (u,v)",
      make_field(ac, p, {{"u", "u"}, {"v", "v"}}), {});
  add(c.potential, "W3", "auxiliary", "potential-coupled exp(-a2*t) generator",
      make_field(ac, p,
                 {{"x", "exp(-a2*t)/(2*a2)"},
                  {"u", "((x + a1/a2)*u + v)*exp(-a2*t)"},
                  {"v", "(x + a1/a2)*v*exp(-a2*t)"}}),
      {});
  add(c.potential, "W4", "auxiliary", "time translation", make_field(ac, p, {{"t", "1"}}),
      {});
  add(c.potential, "W5", "auxiliary", "potential-coupled exp(-2a2t) projective generator",
      make_field(ac, p,
                 {{"x", "-(a2*x+a1)*exp(-2*a2*t)"},
                  {"t", "exp(-2*a2*t)"},
                  {"u", "(-2*((a2*x+a1)^2 - a2)*u - 4*a2*(a2*x+a1)*v)*exp(-2*a2*t)"},
                  {"v", "(a2 - 2*(a2*x+a1)^2)*v*exp(-2*a2*t)"}}),
      {},
      "d/dv coefficient loaded as (a2 - 2*(a2*x+a1)^2)*v*exp(-2*a2*t); the claimed "
      "variant -2*((a2*x+a1)^2 - a2)*v*exp(-2*a2*t) fails the v_x-equation check "
      "with residual a2*u*exp(-2*a2*t)");
  add(c.potential, "W6", "auxiliary", "exp(2a2t) projective generator",
      make_field(ac, p,
                 {{"x", "(a2*x+a1)*exp(2*a2*t)"},
                  {"t", "exp(2*a2*t)"},
                  {"u", "-a2*u*exp(2*a2*t)"}}),
      {});
  add(c.potential, "Wbeta", "auxiliary", "superposition by a potential solution beta(x,t)",
      make_field(ac, p, {{"u", "beta_x(x,t)"}, {"v", "beta(x,t)"}}), {beta_rule(ac, p)});

  return c;
}

const GeneratorRecord& find_generator(const Catalog& c, const std::string& id) {
  for (const auto& g : c.point)
    if (g.id == id) return g;
  for (const auto& g : c.potential)
    if (g.id == id) return g;
  throw Error(Error::Kind::config, "unknown generator id: " + id);
}

Expr w5_phi_claimed_variant(const Catalog& c) {
  JetContext ac = aux_context();
  return bind_params(parse("-2*((a2*x+a1)^2 - a2)*v*exp(-2*a2*t)", ac.syms), c.params,
                     ac.syms);
}

bool potentiality_filter(const GeneratorRecord& g) {
  if (g.system_id != "auxiliary")
    throw Error(Error::Kind::domain, "potentiality filter applies to auxiliary generators");
  const Atom v = Atom::jet("v");
  return !diff(g.field.xi("x"), v).is_zero() || !diff(g.field.xi("t"), v).is_zero() ||
         !diff(g.field.eta("u"), v).is_zero();
}

GeneratorRecord project_potential_symmetry(const GeneratorRecord& g) {
  const JetContext& ctx = g.field.context();
  std::map<std::string, Expr> coeffs;
  for (const std::string& iv : ctx.syms.independents()) coeffs[iv] = g.field.xi(iv);
  coeffs["u"] = g.field.eta("u");
  std::string id = g.id == "W3" ? "Y1" : g.id == "W5" ? "Y2" : "Y(" + g.id + ")";
  return GeneratorRecord{id, g.system_id, "projection of " + g.id + " without the d/dv part",
                         VectorField(ctx, coeffs), g.rules, {}};
}

VectorField y1_reference(const Catalog& c) {
  JetContext ac = aux_context();
  return make_field(ac, c.params,
                    {{"x", "exp(-a2*t)/(2*a2)"}, {"u", "((x + a1/a2)*u + v)*exp(-a2*t)"}});
}

VectorField y2_reference(const Catalog& c) {
  JetContext ac = aux_context();
  return make_field(
      ac, c.params,
      {{"x", "-(a2*x+a1)*exp(-2*a2*t)"},
       {"t", "exp(-2*a2*t)"},
       {"u", "-2*(((a2*x+a1)^2 - a2)*u + 2*a2*(a2*x+a1)*v)*exp(-2*a2*t)"}});
}

// ---- commutator table -------------------------------------------------------

namespace {

// (slot, monomial) decomposition of a vector field with parameter
// coefficients, shared basis across fields.
std::map<Expr, Expr, ExprLess> decompose_param(const Expr& e) {
  std::map<Expr, Expr, ExprLess> out;
  for (const Term& t : e.terms()) {
    std::vector<Factor> key, coeff;
    for (const Factor& f : t.factors)
      (f.atom.kind == AtomKind::param ? coeff : key).push_back(f);
    Expr k = Expr::assemble({Term{Rational(1), std::move(key)}});
    Expr cf = Expr::assemble({Term{t.coeff, std::move(coeff)}});
    auto it = out.find(k);
    if (it == out.end())
      out.emplace(k, cf);
    else
      it->second = it->second + cf;
  }
  return out;
}

std::string combination_string(const TableEntry& e) {
  if (e.image) return "V[" + to_string(*e.image) + "]";
  if (e.combination.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < e.combination.size(); ++i) {
    if (i) s += " + ";
    s += "(" + to_string(e.combination[i].second) + ")*" + e.combination[i].first;
  }
  return s;
}

} // namespace

std::string to_string(const TableEntry& e) {
  if (!e.violation.empty()) return "violation: " + e.violation;
  return combination_string(e);
}

CommutatorTable commutator_table(const Catalog& c) {
  const std::vector<GeneratorRecord>& gens = c.point;
  std::vector<const VectorField*> basis;
  std::vector<std::string> basis_ids;
  for (const auto& g : gens)
    if (g.id != "Valpha") {
      basis.push_back(&g.field);
      basis_ids.push_back(g.id);
    }

  CommutatorTable table;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      TableEntry entry;
      entry.left = gens[i].id;
      entry.right = gens[j].id;
      VectorField b = lie_bracket(gens[i].field, gens[j].field);

      bool formal = false;
      for (const Expr& e : b.xis()) formal = formal || e.contains_func();
      for (const Expr& e : b.etas()) formal = formal || e.contains_func();
      if (formal) {
        if (!b.xi("x").is_zero() || !b.xi("t").is_zero()) {
          entry.violation = "formal bracket with nonzero base components";
        } else {
          entry.image = b.eta("u");
        }
        table.entries.push_back(std::move(entry));
        continue;
      }

      // express b in the basis: stack (slot, monomial) rows
      std::vector<std::string> slots{"x", "t", "u"};
      std::map<std::pair<std::string, Expr>, std::size_t,
               bool (*)(const std::pair<std::string, Expr>&, const std::pair<std::string, Expr>&)>
          rows([](const auto& a, const auto& b2) {
            if (a.first != b2.first) return a.first < b2.first;
            return compare(a.second, b2.second) < 0;
          });
      auto slot_expr = [&](const VectorField& f, const std::string& s) -> const Expr& {
        return (s == "u") ? f.eta("u") : f.xi(s);
      };
      for (const std::string& s : slots) {
        for (const VectorField* f : basis)
          for (const auto& [mono, coeff] : decompose_param(slot_expr(*f, s))) {
            (void)coeff;
            rows.emplace(std::make_pair(s, mono), rows.size());
          }
        for (const auto& [mono, coeff] : decompose_param(slot_expr(b, s))) {
          (void)coeff;
          rows.emplace(std::make_pair(s, mono), rows.size());
        }
      }

      FractionMatrix a(rows.size(), basis.size());
      std::vector<Fraction> rhs(rows.size(), Fraction::zero());
      for (const std::string& s : slots) {
        for (std::size_t k = 0; k < basis.size(); ++k)
          for (const auto& [mono, coeff] : decompose_param(slot_expr(*basis[k], s)))
            a.at(rows.at({s, mono}), k) = Fraction::of(coeff);
        for (const auto& [mono, coeff] : decompose_param(slot_expr(b, s)))
          rhs[rows.at({s, mono})] = Fraction::of(coeff);
      }

      auto sol = solve_linear(a, rhs);
      if (!sol) {
        entry.violation = "bracket not expressible in the basis";
        table.entries.push_back(std::move(entry));
        continue;
      }

      VectorField recon(gens[i].field.context(), {});
      bool coeffs_ok = true;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        if ((*sol)[k].is_zero()) continue;
        Expr ck;
        try {
          ck = (*sol)[k].num / (*sol)[k].den;
        } catch (const Error&) {
          coeffs_ok = false;
          break;
        }
        entry.combination.emplace_back(basis_ids[k], ck);
        std::map<std::string, Expr> scaled;
        for (const std::string& s : slots) scaled[s] = ck * slot_expr(*basis[k], s);
        recon = recon + VectorField(gens[i].field.context(), scaled);
      }
      if (!coeffs_ok || !(recon == b))
        entry.violation = "basis combination failed the exact reconstruction audit";
      table.entries.push_back(std::move(entry));
    }
  return table;
}

CommutatorTable table_golden(const Catalog& c) {
  JetContext pc = point_context();
  auto coeff = [&](const std::string& s) {
    return bind_params(parse(s, pc.syms), c.params, pc.syms);
  };
  auto image = [&](const std::string& s) {
    return bind_params(parse(s, pc.syms), c.params, pc.syms);
  };

  CommutatorTable t;
  auto combo = [&](const std::string& l, const std::string& r,
                   std::vector<std::pair<std::string, std::string>> cs) {
    TableEntry e;
    e.left = l;
    e.right = r;
    for (auto& [id, s] : cs) e.combination.emplace_back(id, coeff(s));
    t.entries.push_back(std::move(e));
  };
  auto formal = [&](const std::string& l, const std::string& r, const std::string& s) {
    TableEntry e;
    e.left = l;
    e.right = r;
    e.image = image(s);
    t.entries.push_back(std::move(e));
  };

  combo("V1", "V2", {});
  combo("V1", "V3", {{"V2", "1"}});
  combo("V1", "V4", {{"V1", "-a2"}});
  combo("V1", "V5", {{"V3", "-4*a2^2"}});
  combo("V1", "V6", {});
  formal("V1", "Valpha", "alpha_x(x,t)*exp(a2*t)");
  combo("V2", "V3", {});
  combo("V2", "V4", {});
  combo("V2", "V5", {});
  combo("V2", "V6", {});
  formal("V2", "Valpha", "-alpha(x,t)");
  combo("V3", "V4", {{"V3", "a2"}});
  combo("V3", "V5", {});
  combo("V3", "V6", {{"V1", "1"}});
  formal("V3", "Valpha",
         "(exp(-a2*t)/a2)*(alpha_x(x,t)/2 - (a2*x+a1)*alpha(x,t))");
  combo("V4", "V5", {{"V5", "-2*a2"}});
  combo("V4", "V6", {{"V6", "2*a2"}});
  formal("V4", "Valpha", "alpha_t(x,t)");
  combo("V5", "V6", {{"V4", "4*a2"}, {"V2", "-2*a2^2"}});
  formal("V5", "Valpha",
         "exp(-2*a2*t)*(alpha_t(x,t) - (a2*x+a1)*alpha_x(x,t)"
         " + 2*(a2*x+a1)^2*alpha(x,t))");
  formal("V6", "Valpha",
         "exp(2*a2*t)*(alpha_t(x,t) + (a2*x+a1)*alpha_x(x,t) + a2*alpha(x,t))");
  return t;
}

std::vector<TableDiff> diff_tables(const CommutatorTable& computed,
                                   const CommutatorTable& golden) {
  std::vector<TableDiff> diffs;
  auto find_entry = [](const CommutatorTable& t, const std::string& l,
                       const std::string& r) -> const TableEntry* {
    for (const auto& e : t.entries)
      if ((e.left == l && e.right == r) || (e.left == r && e.right == l)) return &e;
    return nullptr;
  };

  for (const TableEntry& g : golden.entries) {
    const TableEntry* got = find_entry(computed, g.left, g.right);
    if (!got) {
      diffs.push_back({g.left, g.right, "<missing>", to_string(g)});
      continue;
    }
    bool same = got->violation.empty();
    if (same) {
      if (static_cast<bool>(got->image) != static_cast<bool>(g.image)) {
        same = false;
      } else if (got->image) {
        same = *got->image == *g.image;
      } else {
        std::map<std::string, Expr> a, b;
        for (const auto& [id, ce] : got->combination) a.emplace(id, ce);
        for (const auto& [id, ce] : g.combination) b.emplace(id, ce);
        same = a.size() == b.size();
        if (same)
          for (const auto& [id, ce] : a) {
            auto it = b.find(id);
            if (it == b.end() || !(it->second == ce)) same = false;
          }
      }
    }
    if (!same) diffs.push_back({g.left, g.right, to_string(*got), to_string(g)});
  }
  for (const TableEntry& e : computed.entries)
    if (!find_entry(golden, e.left, e.right))
      diffs.push_back({e.left, e.right, to_string(e), "<missing>"});
  return diffs;
}

} // namespace fpsym
