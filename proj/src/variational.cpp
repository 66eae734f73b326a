#include "jetvar/variational.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"

#include <algorithm>

namespace jetvar {

Expression euler_lagrange(const Expression& lagrangian, SymbolId var) {
  const Atom base = Atom::jet(var, 0, 0);
  Expression result = var == sym::u ? diff_partial(lagrangian, kAtomU) : diff_plain(lagrangian, base);
  for (const Atom& a : lagrangian.atoms()) {
    if (!a.is_jet() || a.symbol != var || a.jet_order() == 0) continue;
    Expression term = diff_plain(lagrangian, a);
    term = total_derivative(term, kAtomT, a.t);
    term = total_derivative(term, kAtomX, a.x);
    if ((a.t + a.x) % 2 == 1)
      result -= term;
    else
      result += term;
  }
  return result;
}

AdjointResult adjoint(const EvolutionEquation& eq) {
  AdjointResult r;
  r.adjoint = euler_lagrange(Expression::atom(kAtomV) * eq.residual(), sym::u);
  r.adjoint_at_v_eq_u = substitute(r.adjoint, kAtomV, Expression::atom(kAtomU));
  r.order = std::max(r.adjoint.max_jet_order(sym::u), r.adjoint.max_jet_order(sym::v));
  return r;
}

namespace {

const Atom kUt = Atom::jet(sym::u, 1, 0);

std::optional<Expression> ut_coefficient(const Expression& e) {
  auto parts = collect_coefficients(e, {kUt});
  Monomial linear;
  linear.factors.emplace_back(kUt, 1);
  auto it = parts.find(linear);
  if (it == parts.end()) return std::nullopt;
  return it->second;
}

}  // namespace

SelfAdjointnessReport self_adjointness_test(const EvolutionEquation& eq) {
  SelfAdjointnessReport report;
  Expression at_u = adjoint(eq).adjoint_at_v_eq_u;
  report.phi = ut_coefficient(at_u);
  if (!report.phi) {
    report.residual = at_u;
    return report;
  }
  report.residual = at_u - *report.phi * eq.residual();
  report.is_self_adjoint = report.residual.is_zero();
  return report;
}

std::optional<Coefficient> proportionality(const Expression& a, const Expression& b) {
  if (b.is_zero()) return std::nullopt;
  const auto& [mb, cb] = *b.terms().begin();
  auto it = a.terms().find(mb);
  if (it == a.terms().end()) return std::nullopt;
  auto inv = cb.inverse();
  if (!inv) return std::nullopt;
  Coefficient c = it->second * *inv;
  if (!(a - b.scaled(c)).is_zero()) return std::nullopt;
  return c;
}

DeterminingSystem determining_system(const EvolutionEquation& family) {
  Expression at_u = adjoint(family).adjoint_at_v_eq_u;
  auto phi = ut_coefficient(at_u);
  if (!phi || !(*phi == Expression(-1L)))
    throw UnsupportedForm("coefficient of u_t in the adjoint at v=u is " +
                          (phi ? to_plain(*phi) : std::string("0")) +
                          "; the determining system needs phi = -1");
  Expression h = at_u + family.residual();
  std::vector<Atom> basis;
  for (const Atom& a : h.atoms())
    if (a.is_jet() && a.jet_order() > 0) basis.push_back(a);

  DeterminingSystem sys;
  sys.unknowns = family.unknown_functions();
  auto parts = collect_coefficients(h, basis);
  std::vector<std::pair<Monomial, Expression>> ordered(parts.begin(), parts.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.first.jet_weight() != b.first.jet_weight())
      return a.first.jet_weight() > b.first.jet_weight();
    return format(a.first, Notation::plain) < format(b.first, Notation::plain);
  });
  for (auto& [m, coeff] : ordered) {
    bool duplicate = std::any_of(sys.equations.begin(), sys.equations.end(),
                                 [&](const DeterminingEquation& d) {
                                   return proportionality(coeff, d.expr).has_value();
                                 });
    if (!duplicate) sys.equations.push_back({coeff, m});
  }
  return sys;
}

Expression apply_family(const Expression& e, const ClosedFormFamily& closed) {
  Bindings b;
  b.functions = closed.assignments;
  b.constants = closed.forced_constants;
  return substitute(e, b);
}

FamilyCheck verify_family(const EvolutionEquation& family, const ClosedFormFamily& closed) {
  std::vector<SymbolId> remaining;
  for (SymbolId f : family.unknown_functions())
    if (!closed.assignments.count(f)) remaining.push_back(f);
  EvolutionEquation eq(apply_family(family.rhs(), closed), remaining);
  FamilyCheck check;
  check.residual = adjoint(eq).adjoint_at_v_eq_u + eq.residual();
  check.holds = check.residual.is_zero();
  return check;
}

}  // namespace jetvar
