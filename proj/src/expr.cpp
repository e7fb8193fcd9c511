#include "fpsym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fpsym {

// ---- atoms ------------------------------------------------------------

Atom Atom::coord(std::string n) {
  Atom a;
  a.kind = AtomKind::coord;
  a.name = std::move(n);
  return a;
}

Atom Atom::jet(std::string dep, DerivIndex d) {
  Atom a;
  a.kind = AtomKind::jet;
  a.name = std::move(dep);
  a.deriv = std::move(d);
  return a;
}

Atom Atom::func(std::string n, std::vector<std::string> args, DerivIndex d) {
  Atom a;
  a.kind = AtomKind::func;
  a.name = std::move(n);
  a.args = std::move(args);
  a.deriv = std::move(d);
  return a;
}

Atom Atom::param(std::string n) {
  Atom a;
  a.kind = AtomKind::param;
  a.name = std::move(n);
  return a;
}

Atom Atom::exponential(const Expr& arg) {
  Atom a;
  a.kind = AtomKind::exponential;
  a.exp_arg = std::make_shared<const Expr>(arg);
  return a;
}

std::string Atom::spelling() const {
  switch (kind) {
    case AtomKind::coord:
    case AtomKind::param:
      return name;
    case AtomKind::jet:
      return deriv.empty() ? name : name + "_" + deriv.suffix();
    case AtomKind::func: {
      std::string s = name;
      if (!deriv.empty()) s += "_" + deriv.suffix();
      s += "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i];
      }
      s += ")";
      return s;
    }
    case AtomKind::exponential:
      return "exp(" + to_string(*exp_arg) + ")";
  }
  return {};
}

namespace {

template <typename T>
int cmp3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int compare(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (int c = cmp3(a.size(), b.size())) return c;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = cmp3(a[i], b[i])) return c;
  return 0;
}

} // namespace

int compare(const Atom& a, const Atom& b) {
  if (int c = cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind))) return c;
  if (int c = cmp3(a.name, b.name)) return c;
  if (int c = compare(a.deriv.vars(), b.deriv.vars())) return c;
  if (int c = compare(a.args, b.args)) return c;
  if (a.kind == AtomKind::exponential) {
    if (!a.exp_arg || !b.exp_arg) return cmp3(static_cast<bool>(a.exp_arg), static_cast<bool>(b.exp_arg));
    return compare(*a.exp_arg, *b.exp_arg);
  }
  return 0;
}

bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }

namespace {

struct AtomLess {
  bool operator()(const Atom& a, const Atom& b) const { return compare(a, b) < 0; }
};

} // namespace

int compare_factors(const Term& a, const Term& b) {
  const std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a.factors[i].atom, b.factors[i].atom)) return c;
    // higher powers first so that x^2 + x prints in falling degree
    if (int c = cmp3(b.factors[i].power, a.factors[i].power)) return c;
  }
  return cmp3(a.factors.size(), b.factors.size());
}

// ---- canonical assembly -------------------------------------------------

namespace {

std::optional<Term> canon_term(const Rational& coeff, const std::vector<Factor>& fs) {
  if (coeff == 0) return std::nullopt;
  std::map<Atom, int, AtomLess> powers;
  Expr exp_total;
  for (const Factor& f : fs) {
    if (f.power == 0) continue;
    if (f.atom.kind == AtomKind::exponential)
      exp_total = exp_total + *f.atom.exp_arg * Expr::from_int(f.power);
    else
      powers[f.atom] += f.power;
  }
  Term t;
  t.coeff = coeff;
  for (const auto& [atom, p] : powers) {
    if (p == 0) continue;
    if (p < 0 && atom.kind != AtomKind::param)
      throw Error(Error::Kind::domain,
                  "negative power of non-parameter atom: " + atom.spelling());
    t.factors.push_back({atom, p});
  }
  if (!exp_total.is_zero()) t.factors.push_back({Atom::exponential(exp_total), 1});
  return t;
}

} // namespace

Expr Expr::assemble(std::vector<Term> raw) {
  std::vector<Term> canon;
  canon.reserve(raw.size());
  for (Term& t : raw)
    if (auto ct = canon_term(t.coeff, t.factors)) canon.push_back(std::move(*ct));
  std::sort(canon.begin(), canon.end(),
            [](const Term& a, const Term& b) { return compare_factors(a, b) < 0; });
  Expr e;
  for (Term& t : canon) {
    if (!e.terms_.empty() && compare_factors(e.terms_.back(), t) == 0) {
      e.terms_.back().coeff += t.coeff;
      if (e.terms_.back().coeff == 0) e.terms_.pop_back();
    } else {
      e.terms_.push_back(std::move(t));
    }
  }
  return e;
}

Expr Expr::from_rational(Rational r) {
  Expr e;
  if (r != 0) e.terms_.push_back(Term{std::move(r), {}});
  return e;
}

Expr Expr::from_atom(Atom a) {
  return assemble({Term{Rational(1), {Factor{std::move(a), 1}}}});
}

Expr Expr::exp(const Expr& arg) {
  if (arg.is_zero()) return from_int(1);
  return from_atom(Atom::exponential(arg));
}

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return Expr::assemble(std::move(all));
}

Expr Expr::operator-() const {
  Expr e = *this;
  for (Term& t : e.terms_) t.coeff = -t.coeff;
  return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& ta : a.terms_)
    for (const Term& tb : b.terms_) {
      Term t;
      t.coeff = ta.coeff * tb.coeff;
      t.factors = ta.factors;
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      prod.push_back(std::move(t));
    }
  return Expr::assemble(std::move(prod));
}

bool Expr::is_invertible() const {
  if (terms_.size() != 1) return false;
  for (const Factor& f : terms_[0].factors)
    if (f.atom.kind != AtomKind::param && f.atom.kind != AtomKind::exponential) return false;
  return true;
}

Expr Expr::pow(int k) const {
  if (k == 1) return *this;
  if (k == 0) {
    if (is_zero()) throw Error(Error::Kind::domain, "0^0 is undefined");
    return from_int(1);
  }
  if (k > 1) {
    Expr result = from_int(1);
    Expr base = *this;
    int n = k;
    while (n > 0) {
      if (n & 1) result = result * base;
      base = (n >>= 1) ? base * base : base;
    }
    return result;
  }
  if (!is_invertible())
    throw Error(Error::Kind::domain,
                "division allowed only by rational constants, parameter monomials "
                "and exponentials; got: " + to_string(*this));
  const Term& t = terms_[0];
  Term inv;
  inv.coeff = Rational(1) / t.coeff;
  for (const Factor& f : t.factors) {
    if (f.atom.kind == AtomKind::param)
      inv.factors.push_back({f.atom, -f.power});
    else
      inv.factors.push_back({Atom::exponential(-(*f.atom.exp_arg) * Expr::from_int(f.power)), 1});
  }
  return assemble({inv}).pow(-k);
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.pow(-1); }

std::optional<Rational> Expr::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].factors.empty()) return terms_[0].coeff;
  return std::nullopt;
}

int Expr::jet_order() const {
  int order = -1;
  for (const Term& t : terms_)
    for (const Factor& f : t.factors) {
      if (f.atom.kind == AtomKind::jet) order = std::max(order, f.atom.deriv.order());
      if (f.atom.kind == AtomKind::exponential)
        order = std::max(order, f.atom.exp_arg->jet_order());
    }
  return order;
}

bool Expr::contains_func(const std::string& name) const {
  for (const Term& t : terms_)
    for (const Factor& f : t.factors) {
      if (f.atom.kind == AtomKind::func && (name.empty() || f.atom.name == name)) return true;
      if (f.atom.kind == AtomKind::exponential && f.atom.exp_arg->contains_func(name)) return true;
    }
  return false;
}

bool Expr::contains_exponential() const {
  for (const Term& t : terms_)
    for (const Factor& f : t.factors)
      if (f.atom.kind == AtomKind::exponential) return true;
  return false;
}

bool Expr::contains_atom(const Atom& a) const {
  for (const Term& t : terms_)
    for (const Factor& f : t.factors) {
      if (f.atom == a) return true;
      if (f.atom.kind == AtomKind::exponential && f.atom.exp_arg->contains_atom(a)) return true;
    }
  return false;
}

namespace {

void collect_atoms_into(const Expr& e, std::vector<Atom>& out) {
  for (const Term& t : e.terms())
    for (const Factor& f : t.factors) {
      auto it = std::lower_bound(out.begin(), out.end(), f.atom, AtomLess{});
      if (it == out.end() || !(*it == f.atom)) out.insert(it, f.atom);
      if (f.atom.kind == AtomKind::exponential) collect_atoms_into(*f.atom.exp_arg, out);
    }
}

} // namespace

std::vector<Atom> Expr::collect_atoms() const {
  std::vector<Atom> out;
  collect_atoms_into(*this, out);
  return out;
}

bool Expr::in_canonical_class() const {
  for (const Term& t : terms_)
    for (const Factor& f : t.factors)
      if (f.atom.kind == AtomKind::exponential && f.atom.exp_arg->contains_exponential())
        return false;
  return true;
}

int compare(const Expr& a, const Expr& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_factors(a.terms_[i], b.terms_[i])) return c;
    if (int c = cmp3(a.terms_[i].coeff, b.terms_[i].coeff)) return c;
  }
  return cmp3(a.terms_.size(), b.terms_.size());
}

// ---- differentiation ----------------------------------------------------

namespace {

Expr diff_atom(const Atom& a, const Atom& v) {
  switch (a.kind) {
    case AtomKind::coord:
      return (v.kind == AtomKind::coord && v.name == a.name) ? Expr::from_int(1) : Expr();
    case AtomKind::param:
      return (v.kind == AtomKind::param && v.name == a.name) ? Expr::from_int(1) : Expr();
    case AtomKind::jet:
      return (v.kind == AtomKind::jet && v.name == a.name && v.deriv == a.deriv)
                 ? Expr::from_int(1)
                 : Expr();
    case AtomKind::func: {
      const bool base_direction =
          v.kind == AtomKind::coord || (v.kind == AtomKind::jet && v.deriv.empty());
      if (!base_direction) return Expr();
      if (std::find(a.args.begin(), a.args.end(), v.name) == a.args.end()) return Expr();
      return Expr::from_atom(Atom::func(a.name, a.args, a.deriv.plus(v.name)));
    }
    case AtomKind::exponential:
      return Expr::from_atom(a) * diff(*a.exp_arg, v);
  }
  return Expr();
}

} // namespace

Expr diff(const Expr& e, const Atom& v) {
  if (v.kind == AtomKind::func || v.kind == AtomKind::exponential)
    throw Error(Error::Kind::domain, "cannot differentiate with respect to " + v.spelling());
  Expr out;
  for (const Term& t : e.terms()) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      Expr da = diff_atom(t.factors[i].atom, v);
      if (da.is_zero()) continue;
      Term rest;
      rest.coeff = t.coeff * t.factors[i].power;
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j == i) {
          if (t.factors[i].power != 1)
            rest.factors.push_back({t.factors[i].atom, t.factors[i].power - 1});
        } else {
          rest.factors.push_back(t.factors[j]);
        }
      }
      out = out + Expr::assemble({rest}) * da;
    }
  }
  return out;
}

// ---- substitution ---------------------------------------------------------

namespace {

Atom direction_atom(const std::string& name, const SymbolContext& ctx) {
  if (ctx.is_independent(name)) return Atom::coord(name);
  if (ctx.is_dependent(name)) return Atom::jet(name);
  if (ctx.is_parameter(name)) return Atom::param(name);
  throw Error(Error::Kind::undeclared, "unknown differentiation direction: " + name);
}

Expr replay_derivatives(Expr repl, const DerivIndex& d, const SymbolContext& ctx) {
  for (const std::string& v : d.vars()) repl = diff(repl, direction_atom(v, ctx));
  return repl;
}

} // namespace

Expr substitute(const Expr& e, const Bindings& b, const SymbolContext& ctx) {
  auto subst_atom = [&](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::coord:
        if (auto it = b.coords.find(a.name); it != b.coords.end()) return it->second;
        return Expr::from_atom(a);
      case AtomKind::param:
        if (auto it = b.params.find(a.name); it != b.params.end()) return it->second;
        return Expr::from_atom(a);
      case AtomKind::jet:
        for (const auto& [atom, repl] : b.jets)
          if (atom == a) return repl;
        return Expr::from_atom(a);
      case AtomKind::func:
        if (auto it = b.funcs.find(a.name); it != b.funcs.end())
          return replay_derivatives(it->second, a.deriv, ctx);
        return Expr::from_atom(a);
      case AtomKind::exponential:
        return Expr::exp(substitute(*a.exp_arg, b, ctx));
    }
    return Expr();
  };

  Expr out;
  for (const Term& t : e.terms()) {
    Expr acc = Expr::from_rational(t.coeff);
    for (const Factor& f : t.factors) acc = acc * subst_atom(f.atom).pow(f.power);
    out = out + acc;
  }
  return out;
}

Expr substitute_atom(const Expr& e, const Atom& a, const Expr& replacement) {
  Expr out;
  for (const Term& t : e.terms()) {
    Expr acc = Expr::from_rational(t.coeff);
    for (const Factor& f : t.factors) {
      if (f.atom == a) {
        acc = acc * replacement.pow(f.power);
      } else if (f.atom.kind == AtomKind::exponential) {
        acc = acc * Expr::exp(substitute_atom(*f.atom.exp_arg, a, replacement)).pow(f.power);
      } else {
        acc = acc * Expr::from_atom(f.atom).pow(f.power);
      }
    }
    out = out + acc;
  }
  return out;
}

Expr bind_solution(const Expr& e, const std::string& dep, const Expr& sol,
                   const SymbolContext& ctx) {
  Expr out = e;
  for (const Atom& a : e.collect_atoms()) {
    if (a.kind != AtomKind::jet || a.name != dep) continue;
    out = substitute_atom(out, a, replay_derivatives(sol, a.deriv, ctx));
  }
  return out;
}

// ---- formal-rule rewriting ------------------------------------------------

Expr rewrite_modulo(const Expr& e, const std::vector<FormalRule>& rules,
                    const SymbolContext& ctx, int max_steps) {
  Expr cur = e;
  for (int step = 0; step < max_steps; ++step) {
    const Atom* best = nullptr;
    const FormalRule* best_rule = nullptr;
    std::vector<Atom> atoms = cur.collect_atoms();
    for (const Atom& a : atoms) {
      if (a.kind != AtomKind::func) continue;
      for (const FormalRule& r : rules) {
        if (a.name != r.func || !a.deriv.contains(r.dir)) continue;
        if (!best || a.deriv.count(r.dir) > best->deriv.count(best_rule->dir) ||
            (a.deriv.count(r.dir) == best->deriv.count(best_rule->dir) &&
             a.deriv.order() > best->deriv.order())) {
          best = &a;
          best_rule = &r;
        }
      }
    }
    if (!best) return cur;
    Expr repl = replay_derivatives(best_rule->rhs, best->deriv.minus(best_rule->dir), ctx);
    cur = substitute_atom(cur, *best, repl);
  }
  throw Error(Error::Kind::domain, "rewrite_modulo: rule elimination did not terminate");
}

// ---- evaluation -----------------------------------------------------------

double eval(const Expr& e, const std::map<std::string, double>& point) {
  auto atom_value = [&](const Atom& a) -> double {
    if (a.kind == AtomKind::func)
      throw Error(Error::Kind::eval,
                  "function symbol must be substituted before evaluation: " + a.spelling());
    if (a.kind == AtomKind::exponential) return std::exp(eval(*a.exp_arg, point));
    auto it = point.find(a.spelling());
    if (it == point.end())
      throw Error(Error::Kind::eval, "unbound symbol in evaluation: " + a.spelling());
    return it->second;
  };

  double sum = 0.0;
  for (const Term& t : e.terms()) {
    double v = to_double(t.coeff);
    for (const Factor& f : t.factors) v *= std::pow(atom_value(f.atom), f.power);
    sum += v;
  }
  if (!std::isfinite(sum))
    throw Error(Error::Kind::eval, "evaluation overflow or NaN");
  return sum;
}

// ---- equality -------------------------------------------------------------

namespace {

// Deterministic random polynomial of degree <= 2 in the function's arguments,
// used to instantiate formal symbols for numeric sampling.
Expr random_polynomial(const std::vector<std::string>& args, const SymbolContext& ctx,
                       std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  Expr p = Expr::from_int(coeff(rng));
  std::vector<Expr> vars;
  for (const auto& a : args) vars.push_back(Expr::from_atom(direction_atom(a, ctx)));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    p = p + Expr::from_int(coeff(rng)) * vars[i];
    for (std::size_t j = i; j < vars.size(); ++j)
      p = p + Expr::from_int(coeff(rng)) * vars[i] * vars[j];
  }
  return p;
}

} // namespace

EqualityResult equal(const Expr& a, const Expr& b, const SymbolContext& ctx,
                     const EqualityOptions& opt) {
  if ((a - b).is_zero()) return {true, EqualityResult::Method::canonical, true, 0.0};
  if (a.in_canonical_class() && b.in_canonical_class())
    return {false, EqualityResult::Method::canonical, true, 0.0};

  std::mt19937_64 rng(opt.seed);

  // Instantiate formal symbols consistently on both sides.
  Bindings fb;
  Expr ea = a, eb = b;
  {
    std::vector<Atom> atoms = a.collect_atoms();
    std::vector<Atom> more = b.collect_atoms();
    atoms.insert(atoms.end(), more.begin(), more.end());
    for (const Atom& at : atoms)
      if (at.kind == AtomKind::func && !fb.funcs.count(at.name))
        fb.func(at.name, random_polynomial(at.args, ctx, rng));
    if (!fb.funcs.empty()) {
      ea = substitute(a, fb, ctx);
      eb = substitute(b, fb, ctx);
    }
  }

  // Symbols needing sample values.
  std::vector<std::string> names;
  std::vector<bool> is_param;
  {
    std::vector<Atom> atoms = ea.collect_atoms();
    std::vector<Atom> more = eb.collect_atoms();
    atoms.insert(atoms.end(), more.begin(), more.end());
    for (const Atom& at : atoms) {
      if (at.kind == AtomKind::exponential) continue;
      std::string s = at.spelling();
      if (std::find(names.begin(), names.end(), s) == names.end()) {
        names.push_back(s);
        is_param.push_back(at.kind == AtomKind::param);
      }
    }
  }

  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> tbox(0.1, 1.1);
  std::uniform_int_distribution<int> halves(1, 3); // |value| in {1/2, 1, 3/2}
  std::uniform_int_distribution<int> sign(0, 1);

  int valid = 0;
  bool all_close = true;
  double max_rel = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    std::map<std::string, double> point;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (is_param[i])
        point[names[i]] = (sign(rng) ? 1.0 : -1.0) * halves(rng) * 0.5;
      else if (names[i] == "t")
        point[names[i]] = tbox(rng);
      else
        point[names[i]] = box(rng);
    }
    double va, vb;
    try {
      va = eval(ea, point);
      vb = eval(eb, point);
    } catch (const Error&) {
      continue;
    }
    ++valid;
    double scale = std::max({1.0, std::abs(va), std::abs(vb)});
    double rel = std::abs(va - vb) / scale;
    max_rel = std::max(max_rel, rel);
    if (rel > opt.tol) all_close = false;
  }

  if (valid < opt.samples)
    return {false, EqualityResult::Method::numeric, false, max_rel};
  return {all_close, EqualityResult::Method::numeric, true, max_rel};
}

// ---- printing -------------------------------------------------------------

namespace {

int print_rank(const Atom& a) {
  switch (a.kind) {
    case AtomKind::param: return 0;
    case AtomKind::coord: return 1;
    case AtomKind::jet: return 2;
    case AtomKind::func: return 3;
    case AtomKind::exponential: return 4;
  }
  return 5;
}

std::string factor_string(const Factor& f) {
  std::string s = f.atom.spelling();
  if (f.power != 1) s += "^" + std::to_string(f.power);
  return s;
}

} // namespace

std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : e.terms()) {
    const bool neg = t.coeff < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;

    std::vector<Factor> fs = t.factors;
    std::stable_sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) {
      if (int c = cmp3(print_rank(a.atom), print_rank(b.atom))) return c < 0;
      return compare(a.atom, b.atom) < 0;
    });

    Rational c = neg ? Rational(-t.coeff) : t.coeff;
    bool need_star = false;
    if (c != 1 || fs.empty()) {
      os << to_string(c);
      need_star = true;
    }
    for (const Factor& f : fs) {
      if (need_star) os << "*";
      os << factor_string(f);
      need_star = true;
    }
  }
  return os.str();
}

} // namespace fpsym
