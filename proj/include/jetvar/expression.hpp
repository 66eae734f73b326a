#pragma once

#include "jetvar/coefficient.hpp"
#include "jetvar/symbols.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace jetvar {

// Product of atoms with positive integer powers times u^(affine exponent). The base
// jet coordinate u never appears in `factors`; it lives in `u_exp` so that
// u^mu * u^2 == u^(mu+2) holds structurally. Symbolic constants live in coefficients.
struct Monomial {
  std::vector<std::pair<Atom, int>> factors;  // sorted, powers >= 1
  Affine u_exp;

  auto operator<=>(const Monomial&) const = default;

  bool is_one() const { return factors.empty() && u_exp.is_zero(); }
  int power_of(const Atom& a) const;
  Monomial operator*(const Monomial& o) const;
  // Sum over jet factors of (derivative order * power).
  int jet_weight() const;
};

// Canonical sum of terms. Two expressions are equal iff their term maps are equal.
class Expression {
 public:
  using TermMap = std::map<Monomial, Coefficient>;

  Expression() = default;
  Expression(const Rational& c) : Expression(Coefficient(c)) {}  // NOLINT
  Expression(long c) : Expression(Coefficient(Rational(c))) {}   // NOLINT
  explicit Expression(const Coefficient& c);
  static Expression atom(const Atom& a);
  static Expression u_power(const Affine& exponent);
  static Expression term(const Monomial& m, const Coefficient& c);

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Value when the expression has no atoms other than symbolic constants.
  std::optional<Coefficient> as_coefficient() const;
  std::optional<Rational> as_rational() const;

  // Atoms present; u is reported when some term has a nonzero u exponent, symbolic
  // constants as AtomKind::constant atoms.
  std::set<Atom> atoms() const;
  bool contains(const Atom& a) const;
  bool contains_kind(AtomKind kind) const;
  // Highest t- or x-order of jets of `var`, -1 if none.
  int max_jet_order(SymbolId var) const;
  int max_t_order(SymbolId var) const;
  int max_x_order(SymbolId var) const;
  // Highest derivative order of function symbol `name`, -1 if absent.
  int max_function_order(SymbolId name) const;

  Expression operator+(const Expression& o) const;
  Expression operator-(const Expression& o) const;
  Expression operator-() const;
  Expression operator*(const Expression& o) const;
  Expression& operator+=(const Expression& o);
  Expression& operator-=(const Expression& o);
  Expression& operator*=(const Expression& o) { return *this = *this * o; }
  bool operator==(const Expression& o) const { return terms_ == o.terms_; }

  Expression scaled(const Coefficient& c) const;
  // Negative powers require an invertible expression.
  Expression pow(int n) const;
  // Inverse of a single term c*u^s with c invertible; nullopt otherwise.
  std::optional<Expression> inverse() const;

 private:
  void add_term(const Monomial& m, const Coefficient& c);
  TermMap terms_;
};

Expression operator/(const Expression& a, const Expression& b);

// Formal partial derivative. For the base coordinate u it also differentiates
// f^(k)(u) -> f^(k+1)(u) and u^s -> s*u^(s-1).
Expression diff_partial(const Expression& e, const Atom& a);

// Partial derivative treating every atom (including function atoms) as independent.
Expression diff_plain(const Expression& e, const Atom& a);

// Applies the derivation that sends each atom to `image(atom)`. `image` is queried with
// kAtomU for the u exponent; symbolic constants are inert.
Expression apply_derivation(const Expression& e,
                            const std::function<Expression(const Atom&)>& image);

// Simultaneous substitution. Binding a base jet coordinate (e.g. v -> u) also rebinds
// its derived coordinates (v_x -> D_x u = u_x). Function bindings replace f^(k)(u) with
// the k-th u-derivative of the bound expression. Constants bind to rationals.
struct Bindings {
  std::map<Atom, Expression> atoms;
  std::map<SymbolId, Expression> functions;
  std::map<SymbolId, Rational> constants;
};

Expression substitute(const Expression& e, const Bindings& b);
Expression substitute(const Expression& e, const Atom& a, const Expression& value);
Expression bind_function(const Expression& e, SymbolId name, const Expression& closed_form);

// Splits e over monomials in the basis atoms: e == sum(monomial * coefficient), with no
// basis atom left in any coefficient. Throws UnsupportedForm if a basis atom appears
// with a negative or symbolic power.
std::map<Monomial, Expression> collect_coefficients(const Expression& e,
                                                    const std::vector<Atom>& basis);

Expression monomial_expression(const Monomial& m);

struct Valuation {
  std::function<Rational(const Atom&)> atom;
  std::function<Rational(SymbolId)> constant;
};

// Exact evaluation. Symbolic exponents must evaluate to integers.
Rational evaluate(const Expression& e, const Valuation& val);

}  // namespace jetvar
