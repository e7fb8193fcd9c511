#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpsym/expr.hpp"
#include "fpsym/parse.hpp"

#include <random>

using namespace fpsym;

namespace {

SymbolContext fpe_ctx() {
  SymbolContext ctx;
  ctx.independent({"x", "t"}).dependent({"u"});
  ctx.function("alpha", {"x", "t"});
  return ctx;
}

Expr P(const std::string& s, const SymbolContext& ctx) { return parse(s, ctx); }

} // namespace

TEST_CASE("parse builds canonical expressions") {
  auto ctx = fpe_ctx();

  CHECK(to_string(P("a2*x + a1", ctx)) == "a2*x + a1");
  CHECK(to_string(P("exp(-a2*t)", ctx)) == "exp(-a2*t)");
  CHECK(P("u_xx - 2*(a2*x+a1)*u_x", ctx) ==
        P("u_xx", ctx) - Expr::from_int(2) * P("a2*x+a1", ctx) * P("u_x", ctx));

  // like terms merge, rationals reduce, zero drops
  CHECK(P("x/2 + x/2", ctx) == P("x", ctx));
  CHECK(P("2/4", ctx) == P("1/2", ctx));
  CHECK(P("x - x", ctx).is_zero());
  CHECK(P("u_xt", ctx) == P("u_tx", ctx));

  // exponentials with equal arguments merge; products of exponentials fold
  CHECK(P("exp(x)*exp(-x)", ctx) == Expr::from_int(1));
  CHECK(P("exp(x+t)*exp(x-t)", ctx) == P("exp(2*x)", ctx));
  CHECK(P("exp(x)^3", ctx) == P("exp(3*x)", ctx));
}

TEST_CASE("parse rejects malformed input") {
  auto ctx = fpe_ctx();
  CHECK_THROWS_AS(P("y + 1", ctx), Error);          // undeclared
  CHECK_THROWS_AS(P("x^(1/2)", ctx), Error);        // non-integer exponent
  CHECK_THROWS_AS(P("x^1.5", ctx), Error);          // non-integer exponent
  CHECK_THROWS_AS(P("1/u", ctx), Error);            // division by a jet coordinate
  CHECK_THROWS_AS(P("1/(x+1)", ctx), Error);        // division by a sum
  CHECK_THROWS_AS(P("x +", ctx), Error);
  CHECK_THROWS_AS(P("u_y", ctx), Error);            // unknown direction
  CHECK_THROWS_AS(P("alpha(t,x)", ctx), Error);     // argument order fixed

  // division by parameter monomials and exponentials is fine
  CHECK(to_string(P("1/(2*a2)", ctx)) == "1/2*a2^-1");
  CHECK(P("x/exp(t)", ctx) == P("x*exp(-t)", ctx));
}

TEST_CASE("differentiation") {
  auto ctx = fpe_ctx();
  const Atom x = Atom::coord("x");
  const Atom t = Atom::coord("t");

  CHECK(diff(P("exp(-a2*t)", ctx), t) == P("-a2*exp(-a2*t)", ctx));
  CHECK(diff(P("u_x", ctx), Atom::jet("u", DerivIndex({"x"}))) == Expr::from_int(1));
  CHECK(diff(P("u_x", ctx), Atom::jet("u")).is_zero());
  CHECK(diff(P("u_x", ctx), x).is_zero()); // jet coordinates are independent symbols
  CHECK(diff(diff(P("alpha(x,t)", ctx), x), x) == P("alpha_xx(x,t)", ctx));
  CHECK(diff(P("x^3*t", ctx), x) == P("3*x^2*t", ctx));
  CHECK(diff(P("a2^-2", ctx), Atom::param("a2")) == P("-2*a2^-3", ctx));
}

TEST_CASE("substitution") {
  auto ctx = fpe_ctx();

  // on-shell style jet replacement
  Expr rhs = P("-a2*u - (a2*x+a1)*u_x + u_xx/2", ctx);
  Bindings b;
  b.jet(Atom::jet("u", DerivIndex({"t"})), rhs);
  CHECK(substitute(P("u_t", ctx), b, ctx) == rhs);
  CHECK(substitute(P("u_x", ctx), b, ctx) == P("u_x", ctx));

  Bindings zero_x;
  zero_x.coord("x", Expr());
  CHECK(substitute(P("x^2", ctx), zero_x, ctx).is_zero());

  // function bindings replay derivative indices
  SymbolContext qctx;
  qctx.independent({"x", "t"}).dependent({"u"}).parameter({"a"}).function("q1", {"t"});
  Bindings qb;
  qb.func("q1", parse("a*exp(-a2*t)", qctx));
  CHECK(substitute(parse("q1(t)", qctx), qb, qctx) == parse("a*exp(-a2*t)", qctx));
  CHECK(substitute(parse("q1_t(t)", qctx), qb, qctx) == parse("-a*a2*exp(-a2*t)", qctx));

  // simultaneous, single pass
  Bindings swap;
  swap.coord("x", P("t", ctx)).coord("t", P("x", ctx));
  CHECK(substitute(P("x - t", ctx), swap, ctx) == P("t - x", ctx));
}

TEST_CASE("equality") {
  auto ctx = fpe_ctx();

  auto r = equal(P("(a2*x+a1)^2", ctx), P("a2^2*x^2 + 2*a1*a2*x + a1^2", ctx), ctx);
  CHECK(r.equal);
  CHECK(r.method == EqualityResult::Method::canonical);

  auto r2 = equal(P("(a2*x+a1)^2", ctx), P("a2^2*x^2", ctx), ctx);
  CHECK_FALSE(r2.equal);
  CHECK(r2.method == EqualityResult::Method::canonical);

  // outside the canonical class the comparison falls back to sampling
  Expr nested = Expr::exp(P("exp(x)", ctx));
  auto r3 = equal(nested, nested + P("x", ctx), ctx);
  CHECK_FALSE(r3.equal);
  CHECK(r3.method == EqualityResult::Method::numeric);
  CHECK(r3.conclusive);

  // overflow at every sample point is reported as inconclusive
  Expr huge = Expr::exp(P("1000000*exp(3*x^2)", ctx));
  auto r4 = equal(huge, huge + P("x", ctx), ctx);
  CHECK(r4.method == EqualityResult::Method::numeric);
  CHECK_FALSE(r4.conclusive);
}

TEST_CASE("evaluation") {
  auto ctx = fpe_ctx();
  CHECK(eval(P("exp(-a2*t)", ctx), {{"a2", 1.0}, {"t", 0.0}}) == doctest::Approx(1.0));
  CHECK(eval(P("-a2*exp(-a2*t)", ctx), {{"a2", 2.0}, {"t", 0.0}}) == doctest::Approx(-2.0));

  // g1 = [-a2 + 2(a2 x + a1)^2] e^{-3 a2 t} at a1=0, a2=1, x=0, t=0
  Expr g1 = P("(-a2 + 2*(a2*x+a1)^2)*exp(-3*a2*t)", ctx);
  CHECK(eval(g1, {{"a1", 0.0}, {"a2", 1.0}, {"x", 0.0}, {"t", 0.0}}) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(eval(P("x", ctx), {}), Error);
  CHECK_THROWS_AS(eval(P("alpha(x,t)", ctx), {{"x", 0.0}, {"t", 0.0}}), Error);
}

namespace {

// Random expressions from the canonical class, for the algebra properties.
Expr random_expr(std::mt19937_64& rng, int max_terms = 4) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> pick(0, 6);
  std::uniform_int_distribution<int> power(1, 3);
  std::uniform_int_distribution<int> expc(-2, 2);

  auto atom = [&](int which) -> Expr {
    switch (which) {
      case 0: return Expr::from_atom(Atom::coord("x"));
      case 1: return Expr::from_atom(Atom::coord("t"));
      case 2: return Expr::from_atom(Atom::jet("u"));
      case 3: return Expr::from_atom(Atom::jet("u", DerivIndex({"x"})));
      case 4: return Expr::from_atom(Atom::param("a2"));
      case 5: return Expr::from_atom(Atom::func("alpha", {"x", "t"}));
      default: {
        Expr arg = Expr::from_int(expc(rng)) * Expr::from_atom(Atom::coord("x")) +
                   Expr::from_int(expc(rng)) * Expr::from_atom(Atom::coord("t"));
        return Expr::exp(arg);
      }
    }
  };

  Expr e;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Expr term = Expr::from_int(coeff(rng));
    int nf = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int j = 0; j < nf; ++j) term = term * atom(pick(rng)).pow(power(rng));
    e = e + term;
  }
  return e;
}

} // namespace

TEST_CASE("algebra properties on random expressions") {
  auto ctx = fpe_ctx();
  std::mt19937_64 rng(7);
  const Atom dirs[] = {Atom::coord("x"), Atom::coord("t"), Atom::jet("u"),
                       Atom::jet("u", DerivIndex({"x"}))};

  for (int iter = 0; iter < 200; ++iter) {
    Expr e = random_expr(rng);
    Expr f = random_expr(rng);
    const Atom& v = dirs[iter % 4];
    const Atom& w = dirs[(iter + 1) % 4];

    // Clairaut
    CHECK(diff(diff(e, v), w) == diff(diff(e, w), v));
    // linearity
    CHECK(diff(e + Expr::from_int(3) * f, v) == diff(e, v) + Expr::from_int(3) * diff(f, v));
    // Leibniz
    CHECK(diff(e * f, v) == diff(e, v) * f + e * diff(f, v));
    // parser round trip
    CHECK(parse(to_string(e), ctx) == e);
    // canonical idempotence: reassembling the canonical terms is a no-op
    CHECK(Expr::assemble(std::vector<Term>(e.terms())) == e);
  }
}

TEST_CASE("numeric consistency of canonical equality") {
  auto ctx = fpe_ctx();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-2.0, 2.0);

  for (int iter = 0; iter < 50; ++iter) {
    Expr e = random_expr(rng);
    Expr lhs = (e + Expr::from_int(1)) * (e - Expr::from_int(1));
    Expr rhs = e * e - Expr::from_int(1);
    CHECK(lhs == rhs);

    Bindings b;
    b.func("alpha", parse("x^2 - t", ctx));
    Expr le = substitute(lhs, b, ctx), re = substitute(rhs, b, ctx);
    std::map<std::string, double> pt{{"x", box(rng)},   {"t", box(rng)}, {"u", box(rng)},
                                     {"u_x", box(rng)}, {"a2", 1.5}};
    double lv, rv;
    try {
      lv = eval(le, pt);
      rv = eval(re, pt);
    } catch (const Error&) {
      continue;
    }
    CHECK(std::abs(lv - rv) <= 1e-9 * std::max({1.0, std::abs(lv), std::abs(rv)}));
  }
}
