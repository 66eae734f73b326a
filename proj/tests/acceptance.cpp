// One pass/fail line per acceptance criterion; exit status 1 if any fails.
#include "support.hpp"

#include "jetvar/conslaw.hpp"
#include "jetvar/numverify.hpp"
#include "jetvar/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>

using namespace testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

bool report(int n, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs > limit_s) o.check(false, "runtime " + std::to_string(secs) + " s over the " +
                                         std::to_string(limit_s) + " s limit");
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << timing << ") "
            << title << "\n";
  for (const auto& note : o.notes) std::cout << "    " << note << "\n";
  return o.pass;
}

bool contains_proportional(const DeterminingSystem& sys, const Expression& e) {
  for (const auto& eq : sys.equations)
    if (proportionality(eq.expr, e)) return true;
  return false;
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

ConservedVector derive(const EvolutionEquation& eq, const Generator& g) {
  ConservedVector sp = specialize_v(conserved_vector(eq, g));
  verify_divergence(sp);
  return reduce_trivial(sp);
}

// Reduced vector is s * (e0, e1) for a nonzero constant s and passes verification.
void check_vector(Outcome& o, const std::string& label, const ConservedVector& cv,
                  const Expression& e0, const Expression& e1) {
  auto s = proportionality(cv.c0, e0);
  bool prop = s && (cv.c1 - e1.scaled(*s)).is_zero();
  o.check(prop, label + ": reduced (" + to_plain(cv.c0) + ", " + to_plain(cv.c1) + ")" +
                    (prop ? " proportional to the expected vector" : " differs from (" + to_plain(e0) +
                                                                         ", " + to_plain(e1) + ")"));
  o.check(cv.verified, label + ": divergence vanishes on solutions");
}

EvolutionEquation family3() {
  return EvolutionEquation(P("r(u)*u_xxx + p(u)*u_xx + q(u)*u_x^2 + a(u)*u_x + b(u)"),
                           ids({"r", "p", "q", "a", "b"}));
}

void criterion1(Outcome& o) {
  DeterminingSystem sys = determining_system(family3());
  o.check(sys.equations.size() == 5, std::to_string(sys.equations.size()) + " equations after deduplication");
  const std::vector<std::pair<const char*, const char*>> expected = {
      {"(ur)''' = 0", "u*r'''(u) + 3*r''(u)"},
      {"(ur)'' = 0", "u*r''(u) + 2*r'(u)"},
      {"uq = (up)'", "u*q(u) - u*p'(u) - p(u)"},
      {"uq' - 2p' - up'' + q = 0", "u*q'(u) - 2*p'(u) - u*p''(u) + q(u)"},
      {"(ub)' = 0", "u*b'(u) + b(u)"}};
  for (const auto& [label, text] : expected) o.check(contains_proportional(sys, P(text)), label);
}

void criterion2(Outcome& o) {
  EvolutionEquation fam = family3();
  SolveResult res = solve_exact_derivative_patterns(determining_system(fam));
  const auto& as = res.solved.assignments;
  auto has = [&](const char* f, const char* v) {
    auto it = as.find(intern(f));
    bool ok = it != as.end() && it->second == P(v);
    o.check(ok, std::string(f) + " = " + (it != as.end() ? to_plain(it->second) : "unsolved"));
  };
  has("r", "a1 + a2/u");
  has("q", "(u*p'(u) + p(u))/u");
  has("b", "a3/u");
  o.check(res.solved.free_functions == ids({"p", "a"}), "p and a remain free");
  o.check(verify_family(fam, res.solved).holds, "F*|_{v=u} + F vanishes identically on the family");
}

void criterion3(Outcome& o) {
  EvolutionEquation fam = EvolutionEquation::from_residual(
      P("u_t + f(u)*u_xxxx + g(u)*u_x*u_xxx - r(u)*u_xxx + h(u)*u_xx^2 + d(u)*u_x^2*u_xx"
        " - p(u)*u_xx - q(u)*u_x^2 - a(u)*u_x + b(u)"),
      ids({"f", "g", "r", "h", "d", "p", "q", "a", "b"}));
  DeterminingSystem sys = determining_system(fam);
  SolveResult res = solve_exact_derivative_patterns(sys);
  const auto& as = res.solved.assignments;
  auto has = [&](const char* f, const char* v) {
    auto it = as.find(intern(f));
    bool ok = it != as.end() && it->second == P(v);
    o.check(ok, std::string(f) + " = " + (it != as.end() ? to_plain(it->second) : "unsolved"));
  };
  has("g", "h(u) + (u*f'(u) + f(u))/u");
  has("d", "c1/u + (u*h'(u) + h(u))/u");
  has("q", "(u*p'(u) + p(u))/u");
  has("r", "a1 + a2/u");
  has("b", "a3/u");
  o.check(verify_family(fam, res.solved).holds, "classified family verified");

  auto sub = EvolutionEquation::from_residual(
      P("u_t + f(u)*u_xxxx + g(u)*u_x*u_xxx + h(u)*u_xx^2 + d(u)*u_x^2*u_xx - p(u)*u_xx - q(u)*u_x^2"),
      ids({"f", "g", "h", "d", "p", "q"}));
  ClosedFormFamily with_c2;
  with_c2.assignments[intern("g")] = P("h(u) + (u*f'(u) + f(u))/u");
  with_c2.assignments[intern("d")] = P("c1/u + (u*h'(u) + h(u))/u");
  with_c2.assignments[intern("q")] = P("(c2 + u*p'(u) + p(u))/u");
  o.check(!verify_family(sub, with_c2).holds, "q = (c2 + (up)')/u with symbolic c2 is rejected");
  SolveResult forced = solve_exact_derivative_patterns(determining_system(sub),
                                                       {{intern("q"), P("(c2 + u*p'(u) + p(u))/u")}});
  auto it = forced.solved.forced_constants.find(intern("c2"));
  o.check(it != forced.solved.forced_constants.end() && it->second == 0, "solver concludes c2 = 0");

  std::vector<std::string> redundant;
  for (std::size_t i : res.redundant) redundant.push_back(format(sys.equations[i].source, Notation::plain));
  const std::vector<std::pair<const char*, const char*>> expected = {
      {"(uf)'' - (ug)' + (uh)' = 0", "u_x*u_xxx"},
      {"(up)'' - (uq)' = 0", "u_x^2"},
      {"(uf)'''' - (ug)''' + (ud)'' = 0", "u_x^4"}};
  for (const auto& [label, src] : expected)
    o.check(std::find(redundant.begin(), redundant.end(), src) != redundant.end(),
            std::string("redundant: ") + label + " [" + src + "]");
}

void criterion4(Outcome& o) {
  check_vector(o, "Burgers, t d/dt - u d/du", derive(EvolutionEquation(P("u*u_x")), Generator(T(), Expression(), -U())),
               P("-u^2"), P("2/3*u^3"));

  EvolutionEquation singular(P("u_xx/u"));
  ConservedVector x = derive(singular, Generator(T(), Expression(), U()));
  ConservedVector y = derive(singular, Generator(P("2*t"), X(), Expression()));
  check_vector(o, "singular, t d/dt + u d/du", x, P("u^2"), P("-2*u_x"));
  Equivalence e = equivalent_up_to_trivial(x, y);
  o.check(e.equivalent && e.scale && *e.scale == Coefficient(make_rational(1, 2)),
          "singular, x d/dx + 2t d/dt equivalent with scale " + (e.scale ? format(*e.scale, Notation::plain) : "none"));

  EvolutionEquation kdv(P("u_xxx + u*u_x"));
  Generator literal(T(), Expression(), q(-1));
  o.info(std::string("KdV, t d/dt - d/du is a point symmetry: ") +
         (verify_point_symmetry(literal, kdv).holds ? "yes" : "no"));
  check_vector(o, "KdV, t d/dt - d/du", derive(kdv, literal), P("-u"), P("u^2/2 + u_xx"));
  ConservedVector boost = derive(kdv, Generator(Expression(), T(), q(-1)));
  o.info("KdV, t d/dx - d/du gives (" + to_plain(boost.c0) + ", " + to_plain(boost.c1) + "), verified: " +
         (boost.verified ? "yes" : "no"));

  EvolutionEquation gkdv(P("u_xxx + u^mu*u_x"));
  Generator xmu(P("-3*t"), P("-x"), P("2/mu*u"));
  ConservedVector g = derive(gkdv, xmu);
  Expression e1 = P("u_x^2 - 2*u*u_xx - 2/(mu + 2)*u^(mu + 2)");
  check_vector(o, "gKdV, X_mu, symbolic mu", g, P("u^2"), e1);
  for (long m : {1L, 2L}) {
    Bindings b;
    b.constants.emplace(intern("mu"), Rational(m));
    EvolutionEquation eq(substitute(gkdv.rhs(), b));
    ConservedVector s = derive(eq, Generator(substitute(xmu.tau, b), substitute(xmu.xi, b), substitute(xmu.eta, b)));
    ConservedVector sub = g;
    sub.c0 = substitute(g.c0, b);
    sub.c1 = substitute(g.c1, b);
    sub.equation = eq;
    verify_divergence(sub);
    std::string label = "gKdV, mu = " + std::to_string(m);
    check_vector(o, label, s, P("u^2"), substitute(e1, b));
    check_vector(o, label + " (specialized symbolic result)", sub, P("u^2"), substitute(e1, b));
  }
}

void criterion5(Outcome& o) {
  const std::vector<std::pair<const char*, bool>> cases = {
      {"u_xxx + u*u_x", true}, {"u*u_x", true}, {"u_xx/u", true}, {"u_xx", false}};
  for (const auto& [rhs, expected] : cases) {
    SelfAdjointnessReport r = self_adjointness_test(EvolutionEquation(P(rhs)));
    bool ok = r.is_self_adjoint == expected && (!expected || (r.phi && *r.phi == q(-1)));
    o.check(ok, std::string("u_t = ") + rhs + ": " + (r.is_self_adjoint ? "self-adjoint" : "not self-adjoint") +
                    (r.phi ? ", phi = " + to_plain(*r.phi) : ""));
  }
}

void criterion6(Outcome& o) {
  {
    ExprGen gen(600);
    int ok = 0;
    for (int i = 0; i < 200; ++i) ok += commute_check(gen.expression(3));
    o.check(ok == 200, "D_t D_x = D_x D_t on " + std::to_string(ok) + "/200 random expressions");
  }
  {
    ExprGen gen(601);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      Expression e = gen.expression(3);
      ok += euler_lagrange(total_derivative(e, i % 2 ? kAtomT : kAtomX)).is_zero();
    }
    o.check(ok == 100, "Euler-Lagrange annihilates " + std::to_string(ok) + "/100 exact expressions");
  }
  {
    ExprGen gen(602);
    int norm_ok = 0;
    for (int i = 0; i < 500; ++i) {
      RawExpr raw = gen.tree(3);
      RandomValuation val(7000 + i);
      Rational direct = eval_raw(raw, val);
      norm_ok += evaluate(normalize(raw), val.valuation()) == direct;
    }
    o.check(norm_ok == 500, "normalize matches raw evaluation on " + std::to_string(norm_ok) + "/500");

    std::mt19937 rng(603);
    int td_ok = 0, tried = 0;
    std::map<SymbolId, Rational> c{{intern("mu"), 2}, {intern("a1"), make_rational(3, 2)}};
    while (tried < 500) {
      Expression e = gen.expression(3);
      PolySolution sol = random_solution(rng);
      if (sol.derivative(0, 0) == 0) continue;
      ++tried;
      td_ok += eval_on(total_derivative(e, kAtomX), sol, c) == eval_dual(e, sol, false, c).d &&
               eval_on(total_derivative(e, kAtomT), sol, c) == eval_dual(e, sol, true, c).d;
    }
    o.check(td_ok == 500, "total derivatives match exact differentiation on " + std::to_string(td_ok) + "/500");
  }
  {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> c(-4, 4);
    auto nz = [&] {
      int v = 0;
      while (v == 0) v = c(rng);
      return Rational(v);
    };
    int in = 0, out = 0;
    for (int i = 0; i < 10; ++i) {
      Expression p = Expression(Rational(c(rng))) + U().scaled(Coefficient(Rational(c(rng)))) +
                     U().pow(-1).scaled(Coefficient(Rational(c(rng))));
      Expression a = U().pow(2).scaled(Coefficient(Rational(c(rng)))) + q(c(rng));
      Expression r = Expression(nz()) + U().pow(-1).scaled(Coefficient(Rational(c(rng))));
      Expression qq = diff_partial(U() * p, kAtomU) * U().pow(-1);
      Expression b = U().pow(-1).scaled(Coefficient(Rational(c(rng))));
      auto rhs = [&](const Expression& rr, const Expression& q2, const Expression& bb) {
        return rr * jet(0, 3) + p * jet(0, 2) + q2 * jet(0, 1).pow(2) + a * jet(0, 1) + bb;
      };
      in += self_adjointness_test(EvolutionEquation(rhs(r, qq, b))).is_self_adjoint;
      Expression bump = U().pow(1 + i % 3).scaled(Coefficient(nz()));
      Expression perturbed = i % 3 == 0 ? rhs(r + bump, qq, b) : i % 3 == 1 ? rhs(r, qq + bump, b) : rhs(r, qq, b + bump);
      out += !self_adjointness_test(EvolutionEquation(perturbed)).is_self_adjoint;
    }
    o.check(in == 10, std::to_string(in) + "/10 in-family instances self-adjoint");
    o.check(out == 10, std::to_string(out) + "/10 perturbed instances rejected");
  }
}

void criterion7(Outcome& o) {
  EvolutionEquation kdv(P("u_xxx + u*u_x"));
  auto run = [&](int n) {
    GridSpec g;
    g.length = 2 * std::numbers::pi;
    g.points = n;
    g.dt = 1e-4;
    g.t_end = 1;
    return integrate(kdv, g, sample([](double x) { return std::cos(x); }, g));
  };
  Trajectory tr = run(256);
  double mass = density_drift(tr, P("u")).relative_drift;
  double energy = density_drift(tr, P("u^2")).relative_drift;
  double control = density_drift(tr, P("u_x^2")).relative_drift;
  o.check(mass <= 1e-6, "relative drift of the integral of u: " + sci(mass));
  o.check(energy <= 1e-6, "relative drift of the integral of u^2: " + sci(energy));
  double worst = std::max(mass, energy);
  o.check(control >= 1e3 * worst, "control density u_x^2 drift " + sci(control) + ", ratio " + sci(control / worst));
  double coarse = density_drift(run(128), P("u^2")).relative_drift;
  double fine = density_drift(run(512), P("u^2")).relative_drift;
  double order1 = std::log2(coarse / energy), order2 = std::log2(energy / fine);
  char buf[160];
  std::snprintf(buf, sizeof buf, "energy drift N=128/256/512: %.2e / %.2e / %.2e, observed orders %.2f, %.2f",
                coarse, energy, fine, order1, order2);
  o.check(order1 > 3.5 && order1 < 4.5 && order2 > 3.5 && order2 < 4.5, buf);
}

}  // namespace

int main() {
  bool all = true;
  all &= report(1, "determining system of the third-order family", 5, criterion1);
  all &= report(2, "classification of the third-order family", 5, criterion2);
  all &= report(3, "classification of the fourth-order family", 10, criterion3);
  all &= report(4, "reduced conserved vectors", 30, criterion4);
  all &= report(5, "self-adjointness decisions", 60, criterion5);
  all &= report(6, "property suites", 120, criterion6);
  all &= report(7, "numerical cross-check on KdV", 60, criterion7);
  std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}
