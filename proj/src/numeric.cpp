#include "fpsym/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace fpsym {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Closed form over (x,t) flattened for fast grid evaluation.
struct Compiled {
  struct Node {
    double coeff;
    int px = 0, pt = 0;
    std::unique_ptr<Compiled> exp_arg;
  };
  std::vector<Node> nodes;

  double operator()(double x, double t) const {
    auto ipow = [](double b, int k) {
      double r = 1.0;
      for (int i = 0; i < k; ++i) r *= b;
      return r;
    };
    double sum = 0.0;
    for (const Node& n : nodes) {
      double v = n.coeff * ipow(x, n.px) * ipow(t, n.pt);
      if (n.exp_arg) v *= std::exp((*n.exp_arg)(x, t));
      sum += v;
    }
    return sum;
  }
};

Compiled compile_xt(const Expr& e) {
  Compiled c;
  for (const Term& t : e.terms()) {
    Compiled::Node n;
    n.coeff = to_double(t.coeff);
    for (const Factor& f : t.factors) {
      switch (f.atom.kind) {
        case AtomKind::coord:
          if (f.atom.name == "x")
            n.px = f.power;
          else if (f.atom.name == "t")
            n.pt = f.power;
          else
            throw Error(Error::Kind::eval, "unexpected coordinate " + f.atom.name);
          if (f.power < 0)
            throw Error(Error::Kind::eval, "negative coordinate power");
          break;
        case AtomKind::exponential:
          n.exp_arg = std::make_unique<Compiled>(compile_xt(*f.atom.exp_arg));
          break;
        default:
          throw Error(Error::Kind::eval,
                      "expression is not a closed form over (x,t): contains " +
                          f.atom.spelling());
      }
    }
    c.nodes.push_back(std::move(n));
  }
  return c;
}

void validate(const GridSpec& g) {
  if (!(g.h > 0) || !(g.x1 > g.x0) || !(g.t1 > g.t0))
    throw Error(Error::Kind::config, "degenerate grid");
  if (g.levels < 2) throw Error(Error::Kind::config, "grid too coarse: need at least 2 levels");
}

} // namespace

ResidualReport fd_residual(const SolutionRecord& s, const FpeParams& p, const GridSpec& grid,
                           double tol) {
  validate(grid);
  auto a1r = p.a1.as_rational();
  auto a2r = p.a2.as_rational();
  if (!a1r || !a2r) throw Error(Error::Kind::config, "numeric parameters required");
  if (*a2r == 0) throw Error(Error::Kind::config, "a2 must be nonzero");

  // bind the drift parameters exactly, then compile
  SymbolContext ctx;
  ctx.independent({"x", "t"});
  Bindings b;
  b.param("a1", p.a1).param("a2", p.a2);
  Compiled u = compile_xt(substitute(s.expression, b, ctx));
  const double a1 = to_double(*a1r);
  const double a2 = to_double(*a2r);

  ResidualReport rep;
  rep.grid = grid;
  rep.tol = tol;

  for (int level = 0; level < grid.levels; ++level) {
    const double h = grid.h / std::pow(2.0, level);
    const auto nx = static_cast<std::size_t>(std::floor((grid.x1 - grid.x0) / h + 1e-9)) + 1;
    const auto nt = static_cast<std::size_t>(std::floor((grid.t1 - grid.t0) / h + 1e-9)) + 1;
    if (nx < 3 || nt < 3) throw Error(Error::Kind::config, "grid too coarse at level");

    std::vector<double> vals(nx * nt);
    double scale = 1.0;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < nt; ++j) {
        double v = u(grid.x0 + static_cast<double>(i) * h,
                     grid.t0 + static_cast<double>(j) * h);
        if (!std::isfinite(v))
          throw Error(Error::Kind::eval, "evaluation overflow on the grid");
        vals[i * nt + j] = v;
        scale = std::max(scale, std::abs(v));
      }

    // Norms are measured on the interior nodes of the coarsest lattice,
    // which every refinement contains; sampling identical physical points
    // keeps the error expansion clean for the order and limit estimates.
    const std::size_t stride = std::size_t{1} << level;
    double max_norm = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = stride; i + stride < nx; i += stride)
      for (std::size_t j = stride; j + stride < nt; j += stride) {
        const double x = grid.x0 + static_cast<double>(i) * h;
        const double uc = vals[i * nt + j];
        const double dt = (vals[i * nt + j + 1] - vals[i * nt + j - 1]) / (2 * h);
        const double dx = (vals[(i + 1) * nt + j] - vals[(i - 1) * nt + j]) / (2 * h);
        const double dxx =
            (vals[(i + 1) * nt + j] - 2 * uc + vals[(i - 1) * nt + j]) / (h * h);
        const double res = (dt + a2 * uc + (a2 * x + a1) * dx - 0.5 * dxx) / scale;
        max_norm = std::max(max_norm, std::abs(res));
        sum_sq += res * res;
        ++count;
      }
    rep.levels.push_back({h, max_norm, std::sqrt(sum_sq / static_cast<double>(count))});
  }

  rep.exact_zero = std::all_of(rep.levels.begin(), rep.levels.end(),
                               [](const LevelResult& l) { return l.max_norm <= 1e-13; });

  for (std::size_t l = 0; l + 1 < rep.levels.size(); ++l) {
    double e0 = rep.levels[l].max_norm, e1 = rep.levels[l + 1].max_norm;
    rep.orders.push_back((e0 > 0 && e1 > 0) ? std::log2(e0 / e1)
                                            : std::numeric_limits<double>::infinity());
  }

  {
    double e_prev = rep.levels[rep.levels.size() - 2].max_norm;
    double e_last = rep.levels.back().max_norm;
    rep.extrapolated = std::abs((4.0 * e_last - e_prev) / 3.0);
  }

  if (rep.exact_zero) {
    rep.verdict = Verdict::verified;
    return rep;
  }
  double min_order = *std::min_element(rep.orders.begin(), rep.orders.end());
  bool stalling = true; // norms not decaying like a convergent scheme
  for (std::size_t l = 0; l + 1 < rep.levels.size(); ++l)
    if (rep.levels[l + 1].max_norm < 0.75 * rep.levels[l].max_norm) stalling = false;
  if (min_order >= 1.5 && rep.extrapolated <= tol)
    rep.verdict = Verdict::verified;
  else if (stalling && rep.levels.back().max_norm >= 1e3 * tol)
    rep.verdict = Verdict::refuted;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

SolutionRecord adjudicate(SolutionRecord s, const FpeParams& p, const GridSpec& grid,
                          double tol) {
  ResidualReport rep = fd_residual(s, p, grid, tol);
  std::ostringstream note;
  note << "fd: " << to_string(rep.verdict) << ", max-norms";
  for (const LevelResult& l : rep.levels) note << " " << l.max_norm;
  note << ", extrapolated " << rep.extrapolated;
  s.note = s.note.empty() ? note.str() : s.note + "; " + note.str();
  switch (rep.verdict) {
    case Verdict::verified:
      if (s.status != SolutionStatus::symbolically_verified)
        s.status = SolutionStatus::numerically_verified;
      break;
    case Verdict::refuted:
      s.status = SolutionStatus::refuted;
      break;
    case Verdict::inconclusive:
      break;
  }
  return s;
}

ProbeResult identity_probe(const Expr& lhs, const Expr& rhs, const SymbolContext& ctx,
                           const ProbeOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> tbox(0.1, 1.1);
  std::uniform_int_distribution<int> halves(1, 3);
  std::uniform_int_distribution<int> sign(0, 1);

  std::vector<std::string> names;
  std::vector<bool> is_param;
  for (const Expr* e : {&lhs, &rhs})
    for (const Atom& a : e->collect_atoms()) {
      if (a.kind == AtomKind::exponential) continue;
      if (a.kind == AtomKind::func)
        throw Error(Error::Kind::eval, "identity probe requires closed forms");
      std::string s = a.spelling();
      if (std::find(names.begin(), names.end(), s) == names.end()) {
        names.push_back(s);
        is_param.push_back(a.kind == AtomKind::param);
      }
    }
  (void)ctx;

  int valid = 0, passed = 0;
  for (int i = 0; i < opt.samples; ++i) {
    std::map<std::string, double> point;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (is_param[k])
        point[names[k]] = (sign(rng) ? 1.0 : -1.0) * halves(rng) * 0.5;
      else if (names[k] == "t")
        point[names[k]] = tbox(rng);
      else
        point[names[k]] = box(rng);
    }
    double a, b;
    try {
      a = eval(lhs, point);
      b = eval(rhs, point);
    } catch (const Error&) {
      continue;
    }
    ++valid;
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a - b) <= opt.tol * scale) ++passed;
  }

  ProbeResult r;
  r.conclusive = valid * 2 >= opt.samples;
  r.confidence = valid ? static_cast<double>(passed) / static_cast<double>(valid) : 0.0;
  r.equal = r.conclusive && passed == valid;
  return r;
}

} // namespace fpsym
