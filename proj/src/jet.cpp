#include "fpsym/jet.hpp"

#include <algorithm>

namespace fpsym {

std::vector<DerivIndex> multi_indices(const std::vector<std::string>& independents, int n) {
  std::vector<DerivIndex> out;
  std::vector<DerivIndex> frontier{DerivIndex{}};
  for (int order = 1; order <= n; ++order) {
    std::vector<DerivIndex> next;
    for (const DerivIndex& J : frontier)
      for (const std::string& v : independents) {
        DerivIndex e = J.plus(v);
        if (std::find(next.begin(), next.end(), e) == next.end()) next.push_back(e);
      }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

Expr total_derivative(const Expr& e, const std::string& iv, const JetContext& ctx) {
  if (!ctx.syms.is_independent(iv))
    throw Error(Error::Kind::domain, "total derivative direction must be independent: " + iv);
  if (e.jet_order() >= ctx.max_order)
    throw Error(Error::Kind::order,
                "total derivative exceeds the jet order bound " + std::to_string(ctx.max_order));
  Expr out = diff(e, Atom::coord(iv));
  // Differentiation directions: every jet atom occurring structurally, plus
  // the order-0 jet of each dependent variable, which also reaches function
  // symbols carrying that variable as an argument.
  std::vector<Atom> dirs;
  for (const std::string& dep : ctx.syms.dependents()) dirs.push_back(Atom::jet(dep));
  for (const Atom& a : e.collect_atoms())
    if (a.kind == AtomKind::jet && !a.deriv.empty()) dirs.push_back(a);
  for (const Atom& a : dirs) {
    Expr de = diff(e, a);
    if (de.is_zero()) continue;
    out = out + Expr::from_atom(Atom::jet(a.name, a.deriv.plus(iv))) * de;
  }
  return out;
}

VectorField::VectorField(JetContext ctx, const std::map<std::string, Expr>& coefficients)
    : ctx_(std::move(ctx)) {
  for (const auto& [name, expr] : coefficients) {
    if (!ctx_.syms.is_independent(name) && !ctx_.syms.is_dependent(name))
      throw Error(Error::Kind::domain, "vector field component for unknown variable: " + name);
    if (expr.jet_order() > 0)
      throw Error(Error::Kind::domain,
                  "vector field coefficients must live on the base space: " + to_string(expr));
  }
  for (const std::string& n : ctx_.syms.independents()) {
    auto it = coefficients.find(n);
    xi_.push_back(it == coefficients.end() ? Expr() : it->second);
  }
  for (const std::string& n : ctx_.syms.dependents()) {
    auto it = coefficients.find(n);
    eta_.push_back(it == coefficients.end() ? Expr() : it->second);
  }
}

const Expr& VectorField::xi(const std::string& independent) const {
  const auto& names = ctx_.syms.independents();
  auto it = std::find(names.begin(), names.end(), independent);
  if (it == names.end())
    throw Error(Error::Kind::domain, "not an independent variable: " + independent);
  return xi_[static_cast<std::size_t>(it - names.begin())];
}

const Expr& VectorField::eta(const std::string& dependent) const {
  const auto& names = ctx_.syms.dependents();
  auto it = std::find(names.begin(), names.end(), dependent);
  if (it == names.end())
    throw Error(Error::Kind::domain, "not a dependent variable: " + dependent);
  return eta_[static_cast<std::size_t>(it - names.begin())];
}

Expr VectorField::apply_base(const Expr& f) const {
  Expr out;
  const auto& ind = ctx_.syms.independents();
  const auto& dep = ctx_.syms.dependents();
  for (std::size_t i = 0; i < ind.size(); ++i)
    out = out + xi_[i] * diff(f, Atom::coord(ind[i]));
  for (std::size_t a = 0; a < dep.size(); ++a)
    out = out + eta_[a] * diff(f, Atom::jet(dep[a]));
  return out;
}

VectorField VectorField::scaled(const Rational& c) const {
  VectorField v = *this;
  Expr ce = Expr::from_rational(c);
  for (Expr& e : v.xi_) e = ce * e;
  for (Expr& e : v.eta_) e = ce * e;
  return v;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.ctx_.syms.independents() != b.ctx_.syms.independents() ||
      a.ctx_.syms.dependents() != b.ctx_.syms.dependents())
    throw Error(Error::Kind::domain, "vector fields live on different base spaces");
  VectorField v = a;
  for (std::size_t i = 0; i < v.xi_.size(); ++i) v.xi_[i] = v.xi_[i] + b.xi_[i];
  for (std::size_t i = 0; i < v.eta_.size(); ++i) v.eta_[i] = v.eta_[i] + b.eta_[i];
  return v;
}

bool VectorField::is_zero() const {
  return std::all_of(xi_.begin(), xi_.end(), [](const Expr& e) { return e.is_zero(); }) &&
         std::all_of(eta_.begin(), eta_.end(), [](const Expr& e) { return e.is_zero(); });
}

std::vector<Expr> characteristic(const VectorField& v) {
  const JetContext& ctx = v.context();
  std::vector<Expr> q;
  const auto& ind = ctx.syms.independents();
  for (const std::string& dep : ctx.syms.dependents()) {
    Expr e = v.eta(dep);
    for (const std::string& iv : ind)
      e = e - v.xi(iv) * Expr::from_atom(Atom::jet(dep, DerivIndex({iv})));
    q.push_back(e);
  }
  return q;
}

ProlongedField::ProlongedField(VectorField base, int order,
                               std::map<std::pair<std::string, DerivIndex>, Expr> coeffs)
    : base_(std::move(base)), order_(order), coeffs_(std::move(coeffs)) {}

const Expr& ProlongedField::coefficient(const std::string& dep, const DerivIndex& J) const {
  auto it = coeffs_.find({dep, J});
  if (it == coeffs_.end())
    throw Error(Error::Kind::order, "no prolongation coefficient for " + dep + "_" + J.suffix());
  return it->second;
}

Expr ProlongedField::apply(const Expr& e) const {
  if (e.jet_order() > order_)
    throw Error(Error::Kind::order, "expression exceeds prolongation order");
  const JetContext& ctx = base_.context();
  Expr out;
  for (const std::string& iv : ctx.syms.independents())
    out = out + base_.xi(iv) * diff(e, Atom::coord(iv));
  for (const auto& [key, coeff] : coeffs_)
    out = out + coeff * diff(e, Atom::jet(key.first, key.second));
  return out;
}

ProlongedField prolong(const VectorField& v, int n) {
  const JetContext& ctx = v.context();
  if (n + 1 > ctx.max_order)
    throw Error(Error::Kind::order, "prolongation order needs jet headroom beyond " +
                                        std::to_string(ctx.max_order));
  const auto& ind = ctx.syms.independents();
  const auto& dep = ctx.syms.dependents();
  std::vector<Expr> q = characteristic(v);

  std::map<std::pair<std::string, DerivIndex>, Expr> coeffs;
  for (std::size_t a = 0; a < dep.size(); ++a) {
    coeffs[{dep[a], DerivIndex{}}] = v.eta(dep[a]);
    for (const DerivIndex& J : multi_indices(ind, n)) {
      Expr dq = q[a];
      for (const std::string& iv : J.vars()) dq = total_derivative(dq, iv, ctx);
      for (const std::string& iv : ind)
        dq = dq + v.xi(iv) * Expr::from_atom(Atom::jet(dep[a], J.plus(iv)));
      coeffs[{dep[a], J}] = dq;
    }
  }
  return ProlongedField(v, n, std::move(coeffs));
}

bool audit_prolongation(const ProlongedField& p) {
  const JetContext& ctx = p.base().context();
  const auto& ind = ctx.syms.independents();
  for (const auto& [key, phi] : p.coefficients()) {
    if (key.second.order() >= p.order()) continue;
    for (const std::string& iv : ind) {
      Expr expect = total_derivative(phi, iv, ctx);
      for (const std::string& jv : ind)
        expect = expect - total_derivative(p.base().xi(jv), iv, ctx) *
                              Expr::from_atom(Atom::jet(key.first, key.second.plus(jv)));
      if (!(expect == p.coefficient(key.first, key.second.plus(iv)))) return false;
    }
  }
  return true;
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  const JetContext& ctx = v.context();
  std::map<std::string, Expr> coeffs;
  const auto& ind = ctx.syms.independents();
  const auto& dep = ctx.syms.dependents();
  for (const std::string& iv : ind)
    coeffs[iv] = v.apply_base(w.xi(iv)) - w.apply_base(v.xi(iv));
  for (const std::string& dv : dep)
    coeffs[dv] = v.apply_base(w.eta(dv)) - w.apply_base(v.eta(dv));
  return VectorField(ctx, coeffs);
}

} // namespace fpsym
