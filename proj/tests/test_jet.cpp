#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpsym/jet.hpp"
#include "fpsym/parse.hpp"

using namespace fpsym;

namespace {

JetContext jctx() {
  JetContext ctx;
  ctx.syms.independent({"x", "t"}).dependent({"u"});
  ctx.syms.function("alpha", {"x", "t"});
  ctx.syms.function("xi", {"x", "t", "u"});
  ctx.syms.function("tau", {"x", "t", "u"});
  ctx.syms.function("eta", {"x", "t", "u"});
  ctx.max_order = 6;
  return ctx;
}

Expr P(const std::string& s, const JetContext& ctx) { return parse(s, ctx.syms); }

VectorField field(const JetContext& ctx, const std::string& xi, const std::string& tau,
                  const std::string& eta) {
  return VectorField(ctx, {{"x", P(xi, ctx)}, {"t", P(tau, ctx)}, {"u", P(eta, ctx)}});
}

// The catalog of point-symmetry generators, inlined as test fixtures.
VectorField V(int i, const JetContext& ctx) {
  switch (i) {
    case 1: return field(ctx, "exp(a2*t)", "0", "0");
    case 2: return field(ctx, "0", "0", "u");
    case 3:
      return field(ctx, "exp(-a2*t)/(2*a2)", "0", "(a2*x+a1)*(u/a2)*exp(-a2*t)");
    case 4: return field(ctx, "0", "1", "0");
    case 5:
      return field(ctx, "-(a2*x+a1)*exp(-2*a2*t)", "exp(-2*a2*t)",
                   "-2*(a2*x+a1)^2*exp(-2*a2*t)*u");
    case 6:
      return field(ctx, "(a2*x+a1)*exp(2*a2*t)", "exp(2*a2*t)", "-a2*u*exp(2*a2*t)");
    default: throw std::logic_error("bad generator index");
  }
}

Expr fpe_delta(const JetContext& ctx) {
  return P("u_t + a2*u + (a2*x+a1)*u_x - u_xx/2", ctx);
}

} // namespace

TEST_CASE("total derivatives") {
  auto ctx = jctx();
  CHECK(total_derivative(P("u", ctx), "x", ctx) == P("u_x", ctx));
  CHECK(total_derivative(P("x*u_x", ctx), "x", ctx) == P("u_x + x*u_xx", ctx));
  CHECK(total_derivative(P("alpha(x,t)", ctx), "t", ctx) == P("alpha_t(x,t)", ctx));
  CHECK(total_derivative(P("u*exp(u)", ctx), "x", ctx) ==
        P("u_x*exp(u) + u*u_x*exp(u)", ctx));

  // commutes on mixed indices
  Expr e = P("x*t*u_x*u + exp(x*u)", ctx);
  CHECK(total_derivative(total_derivative(e, "x", ctx), "t", ctx) ==
        total_derivative(total_derivative(e, "t", ctx), "x", ctx));

  JetContext low = ctx;
  low.max_order = 1;
  CHECK_THROWS_AS(total_derivative(P("u_x", low), "x", low), Error);
}

TEST_CASE("vector fields and characteristics") {
  auto ctx = jctx();
  CHECK_THROWS_AS(field(ctx, "u_x", "0", "0"), Error); // not a base-space coefficient

  auto q2 = characteristic(V(2, ctx));
  CHECK(q2[0] == P("u", ctx));
  auto q1 = characteristic(V(1, ctx));
  CHECK(q1[0] == P("-exp(a2*t)*u_x", ctx));
  auto q4 = characteristic(V(4, ctx));
  CHECK(q4[0] == P("-u_t", ctx));
}

TEST_CASE("prolongation basics") {
  auto ctx = jctx();

  auto p4 = prolong(V(4, ctx), 2);
  for (const auto& J : multi_indices(ctx.syms.independents(), 2))
    CHECK(p4.coefficient("u", J).is_zero());

  auto p2 = prolong(V(2, ctx), 2);
  CHECK(p2.coefficient("u", DerivIndex({"x"})) == P("u_x", ctx));
  CHECK(p2.coefficient("u", DerivIndex({"t"})) == P("u_t", ctx));
  CHECK(p2.coefficient("u", DerivIndex({"x", "x"})) == P("u_xx", ctx));

  // order-0 restriction is the base field
  CHECK(p2.coefficient("u", DerivIndex{}) == V(2, ctx).eta("u"));

  for (int i = 1; i <= 6; ++i) CHECK(audit_prolongation(prolong(V(i, ctx), 2)));
}

TEST_CASE("second-order coefficients match the explicit formulas") {
  auto ctx = jctx();

  auto textbook = [&](const VectorField& v) {
    std::map<std::string, Expr> out;
    Expr q = v.eta("u") - v.xi("x") * P("u_x", ctx) - v.xi("t") * P("u_t", ctx);
    auto Dx = [&](const Expr& e) { return total_derivative(e, "x", ctx); };
    auto Dt = [&](const Expr& e) { return total_derivative(e, "t", ctx); };
    out["x"] = Dx(q) + v.xi("x") * P("u_xx", ctx) + v.xi("t") * P("u_xt", ctx);
    out["t"] = Dt(q) + v.xi("x") * P("u_tx", ctx) + v.xi("t") * P("u_tt", ctx);
    out["xx"] = Dx(Dx(q)) + v.xi("x") * P("u_xxx", ctx) + v.xi("t") * P("u_xxt", ctx);
    out["xt"] = Dx(Dt(q)) + v.xi("x") * P("u_xxt", ctx) + v.xi("t") * P("u_ttx", ctx);
    out["tt"] = Dt(Dt(q)) + v.xi("x") * P("u_ttx", ctx) + v.xi("t") * P("u_ttt", ctx);
    return out;
  };

  std::vector<VectorField> fields;
  for (int i = 1; i <= 6; ++i) fields.push_back(V(i, ctx));
  // generic ansatz field with formal coefficients
  fields.push_back(field(ctx, "xi(x,t,u)", "tau(x,t,u)", "eta(x,t,u)"));

  for (const auto& v : fields) {
    auto p = prolong(v, 2);
    auto tb = textbook(v);
    CHECK(p.coefficient("u", DerivIndex({"x"})) == tb["x"]);
    CHECK(p.coefficient("u", DerivIndex({"t"})) == tb["t"]);
    CHECK(p.coefficient("u", DerivIndex({"x", "x"})) == tb["xx"]);
    CHECK(p.coefficient("u", DerivIndex({"x", "t"})) == tb["xt"]);
    CHECK(p.coefficient("u", DerivIndex({"t", "t"})) == tb["tt"]);
  }
}

TEST_CASE("applying prolonged fields") {
  auto ctx = jctx();
  Expr delta = fpe_delta(ctx);

  CHECK(prolong(V(4, ctx), 2).apply(P("x^2", ctx)).is_zero());

  // the FPE operator is homogeneous of degree one in (u, u_x, u_t, u_xx)
  CHECK(prolong(V(2, ctx), 2).apply(delta) == delta);

  CHECK_THROWS_AS(prolong(V(2, ctx), 1).apply(delta), Error);
}

TEST_CASE("lie brackets") {
  auto ctx = jctx();

  CHECK(lie_bracket(V(1, ctx), V(3, ctx)) == V(2, ctx));
  CHECK(lie_bracket(V(5, ctx), V(5, ctx)).is_zero());

  // [V5,V6] = 4 a2 V4 - 2 a2^2 V2
  VectorField expected = VectorField(
      ctx, {{"t", P("4*a2", ctx)}, {"u", P("-2*a2^2*u", ctx)}});
  CHECK(lie_bracket(V(5, ctx), V(6, ctx)) == expected);

  // antisymmetry and Jacobi across the catalog
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      VectorField sum = lie_bracket(V(i, ctx), V(j, ctx)) + lie_bracket(V(j, ctx), V(i, ctx));
      CHECK(sum.is_zero());
    }
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j)
      for (int k = j + 1; k <= 6; ++k) {
        VectorField jac =
            lie_bracket(V(i, ctx), lie_bracket(V(j, ctx), V(k, ctx))) +
            lie_bracket(V(j, ctx), lie_bracket(V(k, ctx), V(i, ctx))) +
            lie_bracket(V(k, ctx), lie_bracket(V(i, ctx), V(j, ctx)));
        CHECK(jac.is_zero());
      }
}

TEST_CASE("prolongation is linear and compatible with brackets") {
  auto ctx = jctx();

  // linearity: prolong(2 V1 + 3 V5) = 2 prolong(V1) + 3 prolong(V5) coefficient-wise
  VectorField combo = V(1, ctx).scaled(2) + V(5, ctx).scaled(3);
  auto pc = prolong(combo, 2);
  auto p1 = prolong(V(1, ctx), 2);
  auto p5 = prolong(V(5, ctx), 2);
  for (const auto& [key, coeff] : pc.coefficients()) {
    Expr expect = Expr::from_int(2) * p1.coefficient(key.first, key.second) +
                  Expr::from_int(3) * p5.coefficient(key.first, key.second);
    CHECK(coeff == expect);
  }

  // bracket compatibility as derivations on second-order jet coordinates
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) {
      auto pv = prolong(V(i, ctx), 3);
      auto pw = prolong(V(j, ctx), 3);
      auto pb = prolong(lie_bracket(V(i, ctx), V(j, ctx)), 2);
      for (const auto& J : multi_indices(ctx.syms.independents(), 2)) {
        Expr coord = Expr::from_atom(Atom::jet("u", J));
        Expr commutator = pv.apply(pw.apply(coord)) - pw.apply(pv.apply(coord));
        CHECK(pb.apply(coord) == commutator);
      }
    }
}
