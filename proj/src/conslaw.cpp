#include "jetvar/conslaw.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/variational.hpp"

#include <algorithm>

namespace jetvar {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::raw_with_v: return "raw_with_v";
    case Stage::specialized: return "specialized";
    case Stage::reduced: return "reduced";
  }
  return "unknown";
}

namespace {

Atom ux(int n) { return Atom::jet(sym::u, 0, n); }

bool mentions_v(const Expression& e) {
  for (const Atom& a : e.atoms())
    if (a.is_jet() && a.symbol == sym::v) return true;
  return false;
}

// Antiderivative of `coeff` in the jet atom below u_{x^n}, so that D_x B has
// coeff * u_{x^n} as its only u_{x^n} part. nullopt if no closed form is found.
std::optional<Expression> x_antiderivative(const Expression& coeff, int n) {
  if (n == 1) return integrate_u(coeff);
  const Atom lower = ux(n - 1);
  Expression b;
  for (const auto& [m, c] : coeff.terms()) {
    Monomial raised = m;
    int power = 0;
    auto it = std::find_if(raised.factors.begin(), raised.factors.end(),
                           [&](const auto& f) { return f.first == lower; });
    if (it != raised.factors.end()) {
      power = it->second;
      ++it->second;
    } else {
      raised.factors.emplace_back(lower, 1);
      std::sort(raised.factors.begin(), raised.factors.end());
    }
    b += Expression::term(raised, c * Coefficient(make_rational(1, power + 1)));
  }
  return b;
}

// Terms of c0 linear in the highest x-jet that admit an antiderivative, grouped.
std::optional<Expression> exact_part(const Expression& c0) {
  int top = 0;
  for (const Atom& a : c0.atoms())
    if (a.is_jet() && a.symbol == sym::u && a.t == 0) top = std::max<int>(top, a.x);
  for (int n = top; n >= 1; --n) {
    const Atom a = ux(n);
    Expression coeff;
    for (const auto& [m, c] : c0.terms()) {
      if (m.power_of(a) != 1) continue;
      bool lower_only = std::all_of(m.factors.begin(), m.factors.end(), [&](const auto& f) {
        return !f.first.is_jet() || f.first == a || f.first.jet_order() < n;
      });
      if (!lower_only) continue;
      Expression term = diff_plain(Expression::term(m, c), a);
      if (!x_antiderivative(term, n)) continue;
      coeff += term;
    }
    if (coeff.is_zero()) continue;
    if (auto b = x_antiderivative(coeff, n)) return b;
  }
  return std::nullopt;
}

Expression drop_constants(const Expression& e) {
  Expression out;
  for (const auto& [m, c] : e.terms())
    if (!m.is_one()) out += Expression::term(m, c);
  return out;
}

// Terms depending on t alone are annihilated by D_x.
Expression drop_t_only(const Expression& e) {
  Expression out;
  for (const auto& [m, c] : e.terms()) {
    bool t_only = m.u_exp.is_zero() &&
                  std::all_of(m.factors.begin(), m.factors.end(),
                              [](const auto& f) { return f.first == kAtomT; });
    if (!t_only) out += Expression::term(m, c);
  }
  return out;
}

}  // namespace

ConservedVector conserved_vector(const EvolutionEquation& eq, const Generator& g) {
  if (eq.order() > 4)
    throw UnsupportedForm("conserved vectors are built for equations of order at most 4, got " +
                          std::to_string(eq.order()));
  const Expression lag = Expression::atom(kAtomV) * eq.residual();
  const Expression w = g.characteristic();
  const int n = std::max(eq.order(), 1);

  ConservedVector cv{g.tau * lag + w * diff_plain(lag, Atom::jet(sym::u, 1, 0)),
                     g.xi * lag, eq, g};
  Expression dw = w;
  for (int k = 0; k < n; ++k) {
    Expression bracket;
    for (int j = 0; k + j + 1 <= n; ++j) {
      Expression part = total_derivative(diff_plain(lag, ux(k + j + 1)), kAtomX, j);
      if (j % 2 == 1)
        bracket -= part;
      else
        bracket += part;
    }
    cv.c1 += dw * bracket;
    dw = total_derivative(dw, kAtomX);
  }
  cv.stage = Stage::raw_with_v;
  return cv;
}

ConservedVector specialize_v(const ConservedVector& cv) {
  ConservedVector out = cv;
  const Expression u = Expression::atom(kAtomU);
  out.c0 = substitute(cv.c0, kAtomV, u);
  out.c1 = substitute(cv.c1, kAtomV, u);
  out.stage = Stage::specialized;
  out.verified = false;
  out.unverified_premise = !self_adjointness_test(cv.equation).is_self_adjoint;
  return out;
}

Expression divergence_residual(const Expression& c0, const Expression& c1,
                               const EvolutionEquation& eq) {
  return eliminate_t_derivatives(total_derivative(c0, kAtomT) + total_derivative(c1, kAtomX), eq);
}

bool verify_divergence(ConservedVector& cv) {
  if (mentions_v(cv.c0) || mentions_v(cv.c1))
    throw UnsupportedForm("divergence check needs a vector free of v; specialize first");
  cv.verified = divergence_residual(cv.c0, cv.c1, cv.equation).is_zero();
  return cv.verified;
}

ConservedVector reduce_trivial(const ConservedVector& cv, int max_iterations) {
  ConservedVector out = cv;
  out.c0 = drop_constants(eliminate_t_derivatives(cv.c0, cv.equation));
  out.c1 = drop_t_only(eliminate_t_derivatives(cv.c1, cv.equation));
  out.capped = true;
  for (int i = 0; i < max_iterations; ++i) {
    auto b = exact_part(out.c0);
    if (!b) {
      out.capped = false;
      break;
    }
    out.c0 = drop_constants(out.c0 - total_derivative(*b, kAtomX));
    out.c1 = drop_t_only(
        eliminate_t_derivatives(out.c1 + total_derivative(*b, kAtomT), cv.equation));
  }
  out.stage = Stage::reduced;
  if (!mentions_v(out.c0) && !mentions_v(out.c1)) verify_divergence(out);
  return out;
}

Equivalence equivalent_up_to_trivial(const ConservedVector& first,
                                     const ConservedVector& second) {
  auto reduced = [](const ConservedVector& cv) {
    return cv.stage == Stage::reduced ? cv : reduce_trivial(cv);
  };
  Equivalence eq;
  eq.scale = proportionality(reduced(second).c0, reduced(first).c0);
  eq.equivalent = eq.scale.has_value() && !eq.scale->is_zero();
  return eq;
}

}  // namespace jetvar
