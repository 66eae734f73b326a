#include "jetvar/expression.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"
#include "jetvar/jet.hpp"

#include <algorithm>

namespace jetvar {

namespace {

Monomial with_power(const Monomial& m, std::size_t index, int new_power) {
  Monomial r = m;
  if (new_power == 0)
    r.factors.erase(r.factors.begin() + static_cast<std::ptrdiff_t>(index));
  else
    r.factors[index].second = new_power;
  return r;
}

Coefficient affine_coefficient(const Affine& a) { return Coefficient(a.to_poly()); }

}  // namespace

// ---------------------------------------------------------------- Monomial

int Monomial::power_of(const Atom& a) const {
  if (a == kAtomU) return u_exp.is_integer() ? static_cast<int>(u_exp.constant) : 0;
  for (const auto& [atom, p] : factors)
    if (atom == a) return p;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.u_exp = u_exp + o.u_exp;
  r.factors.reserve(factors.size() + o.factors.size());
  std::size_t i = 0, j = 0;
  while (i < factors.size() || j < o.factors.size()) {
    if (j == o.factors.size() || (i < factors.size() && factors[i].first < o.factors[j].first)) {
      r.factors.push_back(factors[i++]);
    } else if (i == factors.size() || o.factors[j].first < factors[i].first) {
      r.factors.push_back(o.factors[j++]);
    } else {
      r.factors.emplace_back(factors[i].first, factors[i].second + o.factors[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

int Monomial::jet_weight() const {
  int w = 0;
  for (const auto& [a, p] : factors) w += a.jet_order() * p;
  return w;
}

// ---------------------------------------------------------------- Expression

Expression::Expression(const Coefficient& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Expression Expression::atom(const Atom& a) {
  if (a.kind == AtomKind::constant) return Expression(Coefficient::symbol(a.symbol));
  if (a == kAtomU) return u_power(Affine(1));
  Monomial m;
  m.factors.emplace_back(a, 1);
  return term(m, Coefficient(Rational(1)));
}

Expression Expression::u_power(const Affine& exponent) {
  Monomial m;
  m.u_exp = exponent;
  return term(m, Coefficient(Rational(1)));
}

Expression Expression::term(const Monomial& m, const Coefficient& c) {
  Expression e;
  if (!c.is_zero()) e.terms_.emplace(m, c);
  return e;
}

void Expression::add_term(const Monomial& m, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::optional<Coefficient> Expression::as_coefficient() const {
  if (terms_.empty()) return Coefficient();
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

std::optional<Rational> Expression::as_rational() const {
  auto c = as_coefficient();
  if (!c) return std::nullopt;
  return c->as_rational();
}

std::set<Atom> Expression::atoms() const {
  std::set<Atom> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [a, p] : m.factors) out.insert(a);
    if (!m.u_exp.is_zero()) out.insert(kAtomU);
    for (const auto& [s, k] : m.u_exp.coeffs) out.insert(Atom::constant(s));
    for (SymbolId s : c.symbols()) out.insert(Atom::constant(s));
  }
  return out;
}

bool Expression::contains(const Atom& a) const {
  for (const auto& [m, c] : terms_) {
    if (a == kAtomU) {
      if (!m.u_exp.is_zero()) return true;
      continue;
    }
    if (a.kind == AtomKind::constant) {
      if (c.symbols().count(a.symbol)) return true;
      for (const auto& [s, k] : m.u_exp.coeffs)
        if (s == a.symbol) return true;
      continue;
    }
    for (const auto& [b, p] : m.factors)
      if (b == a) return true;
  }
  return false;
}

bool Expression::contains_kind(AtomKind kind) const {
  for (const auto& [m, c] : terms_) {
    if (kind == AtomKind::jet && !m.u_exp.is_zero()) return true;
    if (kind == AtomKind::constant && (!c.symbols().empty() || !m.u_exp.coeffs.empty()))
      return true;
    for (const auto& [a, p] : m.factors)
      if (a.kind == kind) return true;
  }
  return false;
}

int Expression::max_jet_order(SymbolId var) const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    if (var == sym::u && !m.u_exp.is_zero()) best = std::max(best, 0);
    for (const auto& [a, p] : m.factors)
      if (a.is_jet() && a.symbol == var) best = std::max(best, a.jet_order());
  }
  return best;
}

int Expression::max_t_order(SymbolId var) const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    if (var == sym::u && !m.u_exp.is_zero()) best = std::max(best, 0);
    for (const auto& [a, p] : m.factors)
      if (a.is_jet() && a.symbol == var) best = std::max(best, static_cast<int>(a.t));
  }
  return best;
}

int Expression::max_x_order(SymbolId var) const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    if (var == sym::u && !m.u_exp.is_zero()) best = std::max(best, 0);
    for (const auto& [a, p] : m.factors)
      if (a.is_jet() && a.symbol == var) best = std::max(best, static_cast<int>(a.x));
  }
  return best;
}

int Expression::max_function_order(SymbolId name) const {
  int best = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [a, p] : m.factors)
      if (a.is_function() && a.symbol == name) best = std::max(best, static_cast<int>(a.k));
  return best;
}

Expression& Expression::operator+=(const Expression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expression& Expression::operator-=(const Expression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Expression Expression::operator+(const Expression& o) const {
  Expression r = *this;
  r += o;
  return r;
}

Expression Expression::operator-(const Expression& o) const {
  Expression r = *this;
  r -= o;
  return r;
}

Expression Expression::operator-() const {
  Expression r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Expression Expression::operator*(const Expression& o) const {
  Expression r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

Expression Expression::scaled(const Coefficient& c) const {
  Expression r;
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.add_term(m, v * c);
  return r;
}

Expression Expression::pow(int n) const {
  if (n < 0) {
    auto inv = inverse();
    if (!inv) throw UnsupportedForm("cannot invert " + to_plain(*this));
    return inv->pow(-n);
  }
  Expression result(1L);
  Expression base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::optional<Expression> Expression::inverse() const {
  if (terms_.size() != 1) return std::nullopt;
  const auto& [m, c] = *terms_.begin();
  if (!m.factors.empty()) return std::nullopt;
  auto ci = c.inverse();
  if (!ci) return std::nullopt;
  Monomial inv;
  inv.u_exp = -m.u_exp;
  return term(inv, *ci);
}

Expression operator/(const Expression& a, const Expression& b) {
  auto inv = b.inverse();
  if (!inv)
    throw UnsupportedForm("division by " + to_plain(b) +
                          " is outside the supported class (only powers of u and nonzero "
                          "constants may divide)");
  return a * *inv;
}

Expression monomial_expression(const Monomial& m) { return Expression::term(m, Coefficient(1L)); }

// ---------------------------------------------------------------- derivations

Expression apply_derivation(const Expression& e,
                            const std::function<Expression(const Atom&)>& image) {
  Expression result;
  std::map<Atom, Expression> cache;
  auto image_of = [&](const Atom& a) -> const Expression& {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, image(a)).first;
    return it->second;
  };
  for (const auto& [m, c] : e.terms()) {
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      const auto& [a, p] = m.factors[i];
      const Expression& img = image_of(a);
      if (img.is_zero()) continue;
      result += Expression::term(with_power(m, i, p - 1), c * Coefficient(Rational(p))) * img;
    }
    if (!m.u_exp.is_zero()) {
      const Expression& img = image_of(kAtomU);
      if (img.is_zero()) continue;
      Monomial lowered = m;
      lowered.u_exp = m.u_exp - Affine(1);
      result += Expression::term(lowered, c * affine_coefficient(m.u_exp)) * img;
    }
  }
  return result;
}

Expression diff_plain(const Expression& e, const Atom& a) {
  return apply_derivation(e, [&](const Atom& b) { return b == a ? Expression(1L) : Expression(); });
}

Expression diff_partial(const Expression& e, const Atom& a) {
  if (a != kAtomU) return diff_plain(e, a);
  return apply_derivation(e, [](const Atom& b) {
    if (b == kAtomU) return Expression(1L);
    if (b.is_function()) return Expression::atom(Atom::function(b.symbol, b.k + 1));
    return Expression();
  });
}

// ---------------------------------------------------------------- substitution

namespace {

Affine substitute_exponent(const Affine& exp, const std::map<SymbolId, Rational>& values) {
  if (values.empty() || exp.is_integer()) return exp;
  Affine r(exp.constant);
  for (const auto& [s, k] : exp.coeffs) {
    auto it = values.find(s);
    if (it == values.end()) {
      r = r + Affine::symbol(s, k);
      continue;
    }
    if (it->second.get_den() != 1 || !it->second.get_num().fits_slong_p())
      throw UnsupportedForm("constant " + symbol_name(s) +
                            " appears in an exponent of u and must be bound to an integer");
    r = r + Affine(k * it->second.get_num().get_si());
  }
  return r;
}

// u^s where u is bound to `img`.
Expression power_of_image(const Expression& img, const Affine& exponent) {
  if (exponent.is_integer()) return img.pow(static_cast<int>(exponent.constant));
  if (img.size() == 1) {
    const auto& [m, c] = *img.terms().begin();
    if (m.factors.empty() && m.u_exp.is_integer() && c.as_rational() == Rational(1))
      return Expression::u_power(exponent * m.u_exp.constant);
  }
  throw UnsupportedForm("cannot raise " + to_plain(img) + " to a symbolic power");
}

}  // namespace

Expression substitute(const Expression& e, const Bindings& b) {
  // Validate and collect rebinding variables.
  std::map<SymbolId, const Expression*> rebound;
  for (const auto& [a, value] : b.atoms) {
    if (a.is_function())
      throw Error("cannot bind derivative atom " + atom_name(a) +
                  " directly; bind the function symbol instead");
    if (a.kind == AtomKind::constant)
      throw Error("constants are bound through Bindings::constants");
    if (a.is_jet() && a.t == 0 && a.x == 0) rebound.emplace(a.symbol, &value);
  }
  auto is_bound = [&](const Atom& a) {
    if (b.atoms.count(a)) return true;
    if (a.is_jet() && rebound.count(a.symbol)) return true;
    if (a.is_function() && b.functions.count(a.symbol)) return true;
    if (a.kind == AtomKind::constant && b.constants.count(a.symbol)) return true;
    return false;
  };
  for (const auto& [a, value] : b.atoms)
    for (const Atom& used : value.atoms())
      if (is_bound(used))
        throw Error("cyclic binding: " + atom_name(a) + " -> " + to_plain(value) + " mentions " +
                    atom_name(used));
  for (const auto& [f, value] : b.functions)
    for (const Atom& used : value.atoms())
      if (is_bound(used) && !(used == kAtomU))
        throw Error("cyclic binding for function " + symbol_name(f));

  std::map<Atom, Expression> images;
  std::map<std::pair<Atom, int>, Expression> powers;
  auto image_of = [&](const Atom& a) -> const Expression& {
    auto it = images.find(a);
    if (it != images.end()) return it->second;
    Expression img;
    if (auto bit = b.atoms.find(a); bit != b.atoms.end()) {
      img = bit->second;
    } else if (a.is_jet() && rebound.count(a.symbol)) {
      img = *rebound.at(a.symbol);
      for (int i = 0; i < a.t; ++i) img = total_derivative(img, kAtomT);
      for (int i = 0; i < a.x; ++i) img = total_derivative(img, kAtomX);
    } else if (a.is_function() && b.functions.count(a.symbol)) {
      img = b.functions.at(a.symbol);
      for (int i = 0; i < a.k; ++i) img = diff_partial(img, kAtomU);
    } else {
      img = Expression::atom(a);
    }
    return images.emplace(a, std::move(img)).first->second;
  };
  auto power = [&](const Atom& a, int p) -> const Expression& {
    auto key = std::make_pair(a, p);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, image_of(a).pow(p)).first->second;
  };

  const bool u_bound = b.atoms.count(kAtomU) > 0;
  Expression result;
  for (const auto& [m, c] : e.terms()) {
    Coefficient coeff = b.constants.empty() ? c : c.substitute(b.constants);
    Affine exponent = substitute_exponent(m.u_exp, b.constants);
    Expression t;
    if (u_bound && !exponent.is_zero()) {
      t = power_of_image(image_of(kAtomU), exponent).scaled(coeff);
    } else {
      Monomial um;
      um.u_exp = exponent;
      t = Expression::term(um, coeff);
    }
    for (const auto& [a, p] : m.factors) {
      if (t.is_zero()) break;
      if (is_bound(a))
        t = t * power(a, p);
      else
        t = t * Expression::term(Monomial{{{a, p}}, Affine()}, Coefficient(1L));
    }
    result += t;
  }
  return result;
}

Expression substitute(const Expression& e, const Atom& a, const Expression& value) {
  Bindings b;
  if (a.kind == AtomKind::constant) {
    auto r = value.as_rational();
    if (!r) throw Error("constants bind to rational values only");
    b.constants.emplace(a.symbol, *r);
  } else {
    b.atoms.emplace(a, value);
  }
  return substitute(e, b);
}

Expression bind_function(const Expression& e, SymbolId name, const Expression& closed_form) {
  Bindings b;
  b.functions.emplace(name, closed_form);
  return substitute(e, b);
}

// ---------------------------------------------------------------- collection

std::map<Monomial, Expression> collect_coefficients(const Expression& e,
                                                    const std::vector<Atom>& basis) {
  const bool u_in_basis = std::find(basis.begin(), basis.end(), kAtomU) != basis.end();
  std::map<Monomial, Expression> out;
  for (const auto& [m, c] : e.terms()) {
    Monomial key, rest;
    if (u_in_basis) {
      if (!m.u_exp.is_integer() || m.u_exp.constant < 0)
        throw UnsupportedForm("u appears with power " + to_plain(Expression::u_power(m.u_exp)) +
                              ", not polynomially");
      key.u_exp = m.u_exp;
    } else {
      rest.u_exp = m.u_exp;
    }
    for (const auto& f : m.factors) {
      if (std::find(basis.begin(), basis.end(), f.first) != basis.end())
        key.factors.push_back(f);
      else
        rest.factors.push_back(f);
    }
    out[key] += Expression::term(rest, c);
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

// ---------------------------------------------------------------- evaluation

Rational evaluate(const Expression& e, const Valuation& val) {
  Rational sum = 0;
  std::map<Atom, Rational> cache;
  auto value = [&](const Atom& a) {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, val.atom(a)).first;
    return it->second;
  };
  for (const auto& [m, c] : e.terms()) {
    Rational t = c.evaluate(val.constant);
    if (!m.u_exp.is_zero()) {
      Rational ex = m.u_exp.to_poly().evaluate(val.constant);
      if (ex.get_den() != 1) throw UnsupportedForm("non-integer exponent of u at evaluation");
      t *= pow(value(kAtomU), ex.get_num().get_si());
    }
    for (const auto& [a, p] : m.factors) t *= pow(value(a), p);
    sum += t;
  }
  return sum;
}

}  // namespace jetvar
