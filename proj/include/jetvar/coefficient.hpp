#pragma once

#include "jetvar/rational.hpp"
#include "jetvar/symbols.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace jetvar {

class ConstPoly;

// c0 + sum(ci * s_i) with integer coefficients over symbolic constants. Used both for
// symbolic exponents of u and for denominator factors of coefficients.
struct Affine {
  long long constant = 0;
  std::vector<std::pair<SymbolId, long long>> coeffs;  // sorted by id, nonzero

  auto operator<=>(const Affine&) const = default;

  Affine() = default;
  explicit Affine(long long c) : constant(c) {}
  static Affine symbol(SymbolId s, long long c = 1);

  bool is_integer() const { return coeffs.empty(); }
  bool is_zero() const { return constant == 0 && coeffs.empty(); }

  Affine operator+(const Affine& o) const;
  Affine operator-(const Affine& o) const;
  Affine operator-() const;
  Affine operator*(long long s) const;

  ConstPoly to_poly() const;
  // Degree-one polynomial with integer coefficients, otherwise nullopt.
  static std::optional<Affine> from_poly(const ConstPoly& p);
};

using ConstMonomial = std::vector<std::pair<SymbolId, int>>;  // sorted by id, exps > 0

// Polynomial over Q in symbolic constants.
class ConstPoly {
 public:
  using TermMap = std::map<ConstMonomial, Rational>;

  ConstPoly() = default;
  ConstPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  static ConstPoly symbol(SymbolId s);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rational> as_rational() const;
  const TermMap& terms() const { return terms_; }

  int degree_in(SymbolId s) const;
  int total_degree() const;
  // Coefficient of s^d as a polynomial free of s.
  ConstPoly coefficient_of(SymbolId s, int d) const;
  std::set<SymbolId> symbols() const;

  ConstPoly operator+(const ConstPoly& o) const;
  ConstPoly operator-(const ConstPoly& o) const;
  ConstPoly operator-() const;
  ConstPoly operator*(const ConstPoly& o) const;
  ConstPoly& operator+=(const ConstPoly& o);
  ConstPoly scaled(const Rational& c) const;
  bool operator==(const ConstPoly& o) const { return terms_ == o.terms_; }

  // Exact quotient by a degree-one factor, or nullopt when it does not divide.
  std::optional<ConstPoly> divide_exact(const Affine& factor) const;

  Rational evaluate(const std::function<Rational(SymbolId)>& value) const;
  // Replaces every symbol in `values`; other symbols stay symbolic.
  ConstPoly substitute(const std::map<SymbolId, Rational>& values) const;

 private:
  void add_term(const ConstMonomial& m, const Rational& c);
  TermMap terms_;
};

// Element of Q(constants) whose denominator is a product of degree-one factors.
// Canonical: factors are primitive integer forms with positive leading coefficient,
// and the numerator is coprime to every factor.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(const Rational& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  Coefficient(long c) : num_(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  explicit Coefficient(ConstPoly p) : num_(std::move(p)) {}
  static Coefficient symbol(SymbolId s) { return Coefficient(ConstPoly::symbol(s)); }

  bool is_zero() const { return num_.is_zero(); }
  std::optional<Rational> as_rational() const;
  bool is_rational() const { return den_.empty() && num_.is_constant(); }
  const ConstPoly& numerator() const { return num_; }
  const std::map<Affine, int>& denominator() const { return den_; }
  ConstPoly denominator_poly() const;
  std::set<SymbolId> symbols() const;

  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator-() const;
  Coefficient operator*(const Coefficient& o) const;
  bool operator==(const Coefficient& o) const { return num_ == o.num_ && den_ == o.den_; }

  // Defined when the numerator factors into a rational times degree-one forms.
  std::optional<Coefficient> inverse() const;

  Rational evaluate(const std::function<Rational(SymbolId)>& value) const;
  Coefficient substitute(const std::map<SymbolId, Rational>& values) const;

  // Divides by an affine form (must not be an integer zero).
  static Coefficient reciprocal(const Affine& a);

 private:
  void reduce();
  ConstPoly num_;
  std::map<Affine, int> den_;
};

}  // namespace jetvar
