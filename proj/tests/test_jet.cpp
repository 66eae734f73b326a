#include "support.hpp"

#include "jetvar/errors.hpp"

#include <doctest.h>

using namespace testing;

TEST_SUITE("jet-calculus") {

TEST_CASE("total derivatives of simple expressions") {
  CHECK(total_derivative(P("u^2"), kAtomX) == P("2*u*u_x"));
  CHECK(total_derivative(P("r(u)*u_xx"), kAtomX) == P("r'(u)*u_x*u_xx + r(u)*u_xxx"));
  CHECK(total_derivative(P("-t*u^3/3"), kAtomT) == P("-u^3/3 - t*u^2*u_t"));
  CHECK(total_derivative(P("u_x"), kAtomT) == P("u_tx"));
}

TEST_CASE("D_x(r(u) u_xx) against u = x^3 + 2x at x = 1") {
  PolySolution sol;
  sol.coeffs[{3, 0}] = 1;
  sol.coeffs[{1, 0}] = 2;
  sol.functions[intern("r")] = {Rational(1), Rational(-2), Rational(3)};  // 1 - 2u + 3u^2
  sol.x0 = 1;
  sol.t0 = 0;
  Expression e = P("r(u)*u_xx");
  Dual along = eval_dual(e, sol, false, {});
  CHECK(eval_on(total_derivative(e, kAtomX), sol, {}) == along.d);
}

TEST_CASE("commute_check") {
  CHECK(commute_check(P("u^3")));
  CHECK(commute_check(P("f(u)*u_x")));
  CHECK(commute_check(P("t*u^mu*u_xx")));
}

TEST_CASE("prolongation of the scaling generator on u_x") {
  Generator g(T(), Expression(), -U());
  auto eta = prolong(g, 1);
  // coefficient of d/du_x
  CHECK(eta.at(Atom::jet(sym::u, 0, 1)) == P("-u_x"));
  // D_x of the characteristic alone keeps the u_tx term
  CHECK(total_derivative(g.characteristic(), kAtomX) == P("-u_x - t*u_tx"));
}

TEST_CASE("prolongation of trivial fields") {
  for (const auto& [atom, coeff] : prolong(Generator(), 3)) CHECK(coeff.is_zero());
  Generator translation(Expression(), q(1), Expression());
  auto eta = prolong(translation, 2);
  CHECK(eta.at(Atom::jet(sym::u, 0, 1)).is_zero());
  CHECK(eta.at(Atom::jet(sym::u, 0, 2)).is_zero());
}

TEST_CASE("prolongation satisfies the one-step recursion") {
  Generator g(P("t^2 + x*u"), P("x*t - u^2"), P("u^3 + x"));
  auto eta = prolong(g, 3);
  for (const auto& [a, e] : eta) {
    if (a.jet_order() == 3) continue;
    Atom ax = Atom::jet(sym::u, a.t, a.x + 1);
    Expression rec = total_derivative(e, kAtomX) -
                     Expression::atom(Atom::jet(sym::u, a.t + 1, a.x)) * total_derivative(g.tau, kAtomX) -
                     Expression::atom(ax) * total_derivative(g.xi, kAtomX);
    CHECK(eta.at(ax) == rec);
  }
}

TEST_CASE("commutators") {
  Generator dx(Expression(), q(1), Expression());
  Generator dt(q(1), Expression(), Expression());
  CHECK(commutator(dx, dt).is_zero());
  Generator s(T(), Expression(), -U());
  Generator c = commutator(s, dt);
  CHECK(c.tau == q(-1));
  CHECK(c.xi.is_zero());
  CHECK(c.eta.is_zero());
  CHECK(commutator(s, s).is_zero());
}

TEST_CASE("on-shell elimination of t-derivatives") {
  EvolutionEquation burgers(P("u*u_x"));
  CHECK(eliminate_t_derivatives(P("u_t"), burgers) == P("u*u_x"));
  CHECK(eliminate_t_derivatives(P("u_tx"), burgers) == P("u_x^2 + u*u_xx"));
  EvolutionEquation kdv(P("u_xxx + u*u_x"));
  CHECK(eliminate_t_derivatives(P("t*u^2*u_t"), kdv) == P("t*u^2*(u_xxx + u*u_x)"));
  Expression e = eliminate_t_derivatives(P("u_tt + u_ttx*u"), kdv);
  CHECK(e.max_t_order(sym::u) <= 0);
  CHECK(eliminate_t_derivatives(e, kdv) == e);
}

TEST_CASE("point symmetry verification") {
  EvolutionEquation burgers(P("u*u_x"));
  CHECK(verify_point_symmetry(Generator(T(), Expression(), -U()), burgers).holds);
  auto bad = verify_point_symmetry(Generator(Expression(), Expression(), U()), burgers);
  CHECK_FALSE(bad.holds);
  CHECK_FALSE(bad.residual.is_zero());

  EvolutionEquation kdv(P("u_xxx + u*u_x"));
  // t d/dt - d/du leaves a residual; the Galilean boost t d/dx - d/du is a symmetry
  auto scaling = verify_point_symmetry(Generator(T(), Expression(), q(-1)), kdv);
  CHECK_FALSE(scaling.holds);
  CHECK(verify_point_symmetry(Generator(Expression(), T(), q(-1)), kdv).holds);

  SymbolId mu = intern("mu");
  EvolutionEquation gkdv(P("u_xxx + u^mu*u_x"));
  Generator xmu(P("-3*t"), P("-x"), U().scaled(Coefficient(2L) * Coefficient::reciprocal(Affine::symbol(mu))));
  CHECK(verify_point_symmetry(xmu, gkdv).holds);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(EvolutionEquation(P("u_t + u_x")), Error);
  CHECK_THROWS_AS(EvolutionEquation(P("v*u_x")), Error);
  CHECK_THROWS_AS(EvolutionEquation(P("u^2")), Error);
  CHECK_THROWS_AS(Generator(P("u_x"), Expression(), Expression()), Error);
  CHECK_THROWS_AS(EvolutionEquation::from_residual(P("u_x + u")), Error);
  CHECK(EvolutionEquation::from_residual(P("2*u_t - 4*u_xx")).rhs() == P("2*u_xx"));
}

TEST_CASE("property: total derivatives commute and are derivations") {
  ExprGen gen(42);
  for (int i = 0; i < 100; ++i) {
    Expression a = gen.expression(3), b = gen.expression(2);
    CHECK(commute_check(a));
    for (const Atom& w : {kAtomX, kAtomT})
      CHECK(total_derivative(a * b, w) == total_derivative(a, w) * b + a * total_derivative(b, w));
  }
}

TEST_CASE("property: total derivative agrees with exact differentiation along solutions") {
  ExprGen gen(5);
  std::mt19937 rng(17);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Expression e = gen.expression(3);
    PolySolution sol = random_solution(rng);
    if (sol.derivative(0, 0) == 0) continue;
    std::map<SymbolId, Rational> c{{intern("mu"), 2}, {intern("a1"), make_rational(3, 2)}};
    CHECK(eval_on(total_derivative(e, kAtomX), sol, c) == eval_dual(e, sol, false, c).d);
    CHECK(eval_on(total_derivative(e, kAtomT), sol, c) == eval_dual(e, sol, true, c).d);
    ++checked;
  }
  CHECK(checked > 90);
}

}
