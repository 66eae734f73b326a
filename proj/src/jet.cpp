#include "jetvar/jet.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"

namespace jetvar {

Expression total_derivative(const Expression& e, const Atom& wrt) {
  const bool in_t = wrt == kAtomT;
  if (!in_t && wrt != kAtomX) throw Error("total derivative is taken in t or x only");
  const Expression u_wrt = Expression::atom(Atom::jet(sym::u, in_t ? 1 : 0, in_t ? 0 : 1));
  return apply_derivation(e, [&](const Atom& a) -> Expression {
    switch (a.kind) {
      case AtomKind::independent:
        return a == wrt ? Expression(1L) : Expression();
      case AtomKind::jet:
        return Expression::atom(Atom::jet(a.symbol, a.t + (in_t ? 1 : 0), a.x + (in_t ? 0 : 1)));
      case AtomKind::function:
        return Expression::atom(Atom::function(a.symbol, a.k + 1)) * u_wrt;
      case AtomKind::constant:
        return Expression();
    }
    return Expression();
  });
}

Expression total_derivative(const Expression& e, const Atom& wrt, int times) {
  Expression r = e;
  for (int i = 0; i < times; ++i) r = total_derivative(r, wrt);
  return r;
}

bool commute_check(const Expression& e) {
  Expression tx = total_derivative(total_derivative(e, kAtomX), kAtomT);
  Expression xt = total_derivative(total_derivative(e, kAtomT), kAtomX);
  return (tx - xt).is_zero();
}

// ---------------------------------------------------------------- EvolutionEquation

EvolutionEquation::EvolutionEquation(Expression rhs, std::vector<SymbolId> unknown_functions)
    : rhs_(std::move(rhs)), unknowns_(std::move(unknown_functions)) {
  for (const Atom& a : rhs_.atoms()) {
    if (a.is_jet() && a.symbol == sym::u && a.t > 0)
      throw Error("right-hand side contains the t-derivative " + atom_name(a));
    if (a.is_jet() && a.symbol != sym::u)
      throw Error("right-hand side contains the foreign dependent variable " + atom_name(a));
  }
  order_ = rhs_.max_x_order(sym::u);
  if (order_ < 1) throw Error("evolution equation must contain an x-derivative of u");
  residual_ = Expression::atom(Atom::jet(sym::u, 1, 0)) - rhs_;
}

EvolutionEquation EvolutionEquation::from_residual(const Expression& residual,
                                                   std::vector<SymbolId> unknown_functions) {
  const Atom ut = Atom::jet(sym::u, 1, 0);
  auto parts = collect_coefficients(residual, {ut});
  Monomial linear;
  linear.factors.emplace_back(ut, 1);
  for (const auto& [m, c] : parts)
    if (!m.is_one() && !(m == linear))
      throw Error("equation is not linear in u_t");
  auto it = parts.find(linear);
  if (it == parts.end()) throw Error("equation does not contain u_t");
  auto c = it->second.as_rational();
  if (!c || *c == 0)
    throw Error("coefficient of u_t must be a nonzero number, found " + to_plain(it->second));
  Expression rest = parts.count(Monomial{}) ? parts.at(Monomial{}) : Expression();
  return EvolutionEquation((-rest).scaled(Coefficient(Rational(1) / *c)),
                           std::move(unknown_functions));
}

// ---------------------------------------------------------------- Generator

Generator::Generator(Expression tau_, Expression xi_, Expression eta_)
    : tau(std::move(tau_)), xi(std::move(xi_)), eta(std::move(eta_)) {
  for (const Expression* c : {&tau, &xi, &eta})
    for (const Atom& a : c->atoms())
      if (a.is_jet() && !(a == kAtomU))
        throw Error("generator component depends on " + atom_name(a) +
                    "; point generators depend on t, x, u only");
}

Expression Generator::characteristic() const {
  return eta - tau * Expression::atom(Atom::jet(sym::u, 1, 0)) -
         xi * Expression::atom(Atom::jet(sym::u, 0, 1));
}

Expression Generator::apply(const Expression& f) const {
  return tau * diff_partial(f, kAtomT) + xi * diff_partial(f, kAtomX) +
         eta * diff_partial(f, kAtomU);
}

std::map<Atom, Expression> prolong(const Generator& g, int order) {
  std::map<Atom, Expression> out;
  const Expression w = g.characteristic();
  for (int i = 0; i <= order; ++i) {
    Expression dw = total_derivative(w, kAtomT, i);
    for (int j = 0; i + j <= order; ++j) {
      if (j > 0) dw = total_derivative(dw, kAtomX);
      if (i + j == 0) continue;
      out[Atom::jet(sym::u, i, j)] = dw + g.tau * Expression::atom(Atom::jet(sym::u, i + 1, j)) +
                                     g.xi * Expression::atom(Atom::jet(sym::u, i, j + 1));
    }
  }
  return out;
}

Expression apply_prolonged(const Generator& g, const Expression& e) {
  Expression r = g.tau * diff_partial(e, kAtomT) + g.xi * diff_partial(e, kAtomX) +
                 g.eta * diff_partial(e, kAtomU);
  int order = e.max_jet_order(sym::u);
  if (order < 1) return r;
  for (const auto& [atom, coeff] : prolong(g, order)) {
    if (!e.contains(atom)) continue;
    r += coeff * diff_plain(e, atom);
  }
  return r;
}

Generator commutator(const Generator& x, const Generator& y) {
  return Generator(x.apply(y.tau) - y.apply(x.tau), x.apply(y.xi) - y.apply(x.xi),
                   x.apply(y.eta) - y.apply(x.eta));
}

// ---------------------------------------------------------------- on-shell

Expression eliminate_t_derivatives(const Expression& e, const EvolutionEquation& eq) {
  std::map<std::pair<int, int>, Expression> cache;
  std::function<const Expression&(int, int)> value = [&](int i, int j) -> const Expression& {
    auto key = std::make_pair(i, j);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    Expression v;
    if (j > 0) {
      v = total_derivative(value(i, j - 1), kAtomX);
    } else if (i == 1) {
      v = eq.rhs();
    } else {
      Expression dt = total_derivative(value(i - 1, 0), kAtomT);
      Bindings b;
      for (const Atom& a : dt.atoms())
        if (a.is_jet() && a.symbol == sym::u && a.t > 0) b.atoms.emplace(a, value(a.t, a.x));
      v = substitute(dt, b);
    }
    return cache.emplace(key, std::move(v)).first->second;
  };
  Bindings b;
  for (const Atom& a : e.atoms())
    if (a.is_jet() && a.symbol == sym::u && a.t > 0) b.atoms.emplace(a, value(a.t, a.x));
  if (b.atoms.empty()) return e;
  return substitute(e, b);
}

SymmetryCheck verify_point_symmetry(const Generator& g, const EvolutionEquation& eq) {
  SymmetryCheck check;
  check.residual = eliminate_t_derivatives(apply_prolonged(g, eq.residual()), eq);
  check.holds = check.residual.is_zero();
  return check;
}

}  // namespace jetvar
