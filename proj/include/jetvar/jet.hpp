#pragma once

#include "jetvar/expression.hpp"

#include <map>
#include <vector>

namespace jetvar {

// Total derivative D_t or D_x (wrt must be kAtomT or kAtomX).
Expression total_derivative(const Expression& e, const Atom& wrt);
Expression total_derivative(const Expression& e, const Atom& wrt, int times);

// is_zero(D_t D_x e - D_x D_t e); always true, kept as a test hook.
bool commute_check(const Expression& e);

// u_t = rhs with rhs free of t-derivatives of u.
class EvolutionEquation {
 public:
  // Throws Error when rhs mentions a t-derivative of u, the adjoint variable v, or has
  // no x-derivative.
  explicit EvolutionEquation(Expression rhs, std::vector<SymbolId> unknown_functions = {});

  // Solves `residual = 0` for u_t; the u_t coefficient must be a nonzero rational.
  static EvolutionEquation from_residual(const Expression& residual,
                                         std::vector<SymbolId> unknown_functions = {});

  const Expression& rhs() const { return rhs_; }
  // F = u_t - rhs
  const Expression& residual() const { return residual_; }
  int order() const { return order_; }
  const std::vector<SymbolId>& unknown_functions() const { return unknowns_; }

 private:
  Expression rhs_;
  Expression residual_;
  int order_ = 0;
  std::vector<SymbolId> unknowns_;
};

// Point symmetry generator tau d/dt + xi d/dx + eta d/du.
struct Generator {
  Expression tau;
  Expression xi;
  Expression eta;

  Generator() = default;
  // Throws Error unless every component depends on t, x, u (and functions of u) only.
  Generator(Expression tau, Expression xi, Expression eta);

  bool is_zero() const { return tau.is_zero() && xi.is_zero() && eta.is_zero(); }
  bool operator==(const Generator& o) const = default;

  // Characteristic W = eta - tau u_t - xi u_x.
  Expression characteristic() const;
  // tau f_t + xi f_x + eta f_u on functions of (t, x, u).
  Expression apply(const Expression& f) const;
};

// Prolongation coefficients eta_J for every jet u_J with 1 <= |J| <= order:
// eta_J = D_J(W) + tau u_{Jt} + xi u_{Jx}.
std::map<Atom, Expression> prolong(const Generator& g, int order);

// X^(n) e with n the highest jet order of u in e.
Expression apply_prolonged(const Generator& g, const Expression& e);

// [X, Y] as a point generator.
Generator commutator(const Generator& x, const Generator& y);

// Replaces every t-derivative of u using u_t = rhs and its total derivatives.
Expression eliminate_t_derivatives(const Expression& e, const EvolutionEquation& eq);

struct SymmetryCheck {
  bool holds = false;
  Expression residual;
};

// X^(n)(F) restricted to solutions.
SymmetryCheck verify_point_symmetry(const Generator& g, const EvolutionEquation& eq);

}  // namespace jetvar
