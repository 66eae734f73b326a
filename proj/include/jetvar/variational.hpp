#pragma once

#include "jetvar/expression.hpp"
#include "jetvar/jet.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jetvar {

// delta L / delta var: sum over jets var_{t^i x^j} of (-D_t)^i (-D_x)^j dL/dvar_{t^i x^j}.
Expression euler_lagrange(const Expression& lagrangian, SymbolId var = sym::u);

struct AdjointResult {
  Expression adjoint;          // F* = delta(vF)/delta u
  Expression adjoint_at_v_eq_u;
  int order = 0;
};

AdjointResult adjoint(const EvolutionEquation& eq);

// F*|_{v=u} = phi F with phi read off the u_t coefficient.
struct SelfAdjointnessReport {
  bool is_self_adjoint = false;
  std::optional<Expression> phi;
  Expression residual;  // F*|_{v=u} - phi F, or F*|_{v=u} when phi is undetermined
};

SelfAdjointnessReport self_adjointness_test(const EvolutionEquation& eq);

struct DeterminingEquation {
  Expression expr;      // = 0, in function atoms of u, powers of u and constants
  Monomial source;      // jet monomial whose coefficient produced it
};

struct DeterminingSystem {
  std::vector<DeterminingEquation> equations;
  std::vector<SymbolId> unknowns;  // in declaration order
};

// Coefficients of F*|_{v=u} + F over all jet monomials. Throws UnsupportedForm when the
// u_t coefficient of F*|_{v=u} is not -1.
DeterminingSystem determining_system(const EvolutionEquation& family);

// c * e for a nonzero constant c (an element of Q(constants)); nullopt otherwise.
std::optional<Coefficient> proportionality(const Expression& a, const Expression& b);

struct ClosedFormFamily {
  std::map<SymbolId, Expression> assignments;  // function -> expression in u
  std::vector<SymbolId> free_functions;
  std::vector<SymbolId> constants;             // integration constants introduced
  std::map<SymbolId, Rational> forced_constants;  // e.g. c2 = 0
};

struct SolveStep {
  enum class Pattern { algebraic, exact_derivative, constant_constraint };
  Pattern pattern;
  std::size_t equation;   // index into the input system
  SymbolId target;        // function or constant solved for
  Expression value;
  int derivative_order = 0;  // k of (u^m f)^(k) = ...
};

struct SolveResult {
  ClosedFormFamily solved;
  std::vector<SolveStep> steps;
  std::vector<std::size_t> redundant;  // equations implied by the solved ones
  std::vector<std::size_t> unsolved;
  std::vector<Expression> unsolved_residuals;
  bool inconsistent = false;
};

// Solves the exact-derivative patterns of determining systems: algebraic elimination of
// an underived unknown, (u^m f)^(k) + S = 0 with S integrable k times, and linear
// constraints on integration constants. `seed` pre-assigns functions (used to test
// candidate closed forms).
SolveResult solve_exact_derivative_patterns(const DeterminingSystem& sys,
                                            const std::map<SymbolId, Expression>& seed = {});

// Antiderivative in u of an expression linear in function atoms; nullopt if no closed
// form is found. Atoms other than u and function atoms are treated as constants.
std::optional<Expression> integrate_u(const Expression& e);

struct FamilyCheck {
  bool holds = false;
  Expression residual;  // F*|_{v=u} + F after substitution
};

FamilyCheck verify_family(const EvolutionEquation& family, const ClosedFormFamily& closed);

// Applies a closed-form family to an expression.
Expression apply_family(const Expression& e, const ClosedFormFamily& closed);

}  // namespace jetvar
