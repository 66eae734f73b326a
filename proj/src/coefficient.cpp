#include "jetvar/coefficient.hpp"

#include <numeric>
#include <stdexcept>

namespace jetvar {

namespace {

using CoeffVec = std::vector<std::pair<SymbolId, long long>>;

CoeffVec merge(const CoeffVec& a, const CoeffVec& b, long long sign) {
  CoeffVec out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign * b[j].second);
      ++j;
    } else {
      long long c = a[i].second + sign * b[j].second;
      if (c != 0) out.emplace_back(a[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

ConstMonomial multiply(const ConstMonomial& a, const ConstMonomial& b) {
  ConstMonomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

ConstPoly power(const ConstPoly& p, int n) {
  ConstPoly r(Rational(1));
  for (int i = 0; i < n; ++i) r = r * p;
  return r;
}

ConstPoly symbol_power(SymbolId s, int d) {
  if (d == 0) return ConstPoly(Rational(1));
  ConstPoly p;
  p += ConstPoly::symbol(s);
  return power(p, d);
}

// Integer-coefficient primitive form with positive leading symbolic coefficient,
// together with the scalar that was divided out.
std::pair<Affine, long long> normalize_factor(const Affine& a) {
  long long g = std::llabs(a.constant);
  for (const auto& [s, c] : a.coeffs) g = std::gcd(g, std::llabs(c));
  if (a.coeffs.front().second < 0) g = -g;
  Affine n;
  n.constant = a.constant / g;
  for (const auto& [s, c] : a.coeffs) n.coeffs.emplace_back(s, c / g);
  return {n, g};
}

}  // namespace

// ---------------------------------------------------------------- Affine

Affine Affine::symbol(SymbolId s, long long c) {
  Affine a;
  if (c != 0) a.coeffs.emplace_back(s, c);
  return a;
}

Affine Affine::operator+(const Affine& o) const {
  Affine r;
  r.constant = constant + o.constant;
  r.coeffs = merge(coeffs, o.coeffs, 1);
  return r;
}

Affine Affine::operator-(const Affine& o) const {
  Affine r;
  r.constant = constant - o.constant;
  r.coeffs = merge(coeffs, o.coeffs, -1);
  return r;
}

Affine Affine::operator-() const { return Affine(0) - *this; }

Affine Affine::operator*(long long s) const {
  if (s == 0) return Affine(0);
  Affine r = *this;
  r.constant *= s;
  for (auto& [sym, c] : r.coeffs) c *= s;
  return r;
}

ConstPoly Affine::to_poly() const {
  ConstPoly p(Rational(static_cast<long>(constant)));
  for (const auto& [s, c] : coeffs) p += ConstPoly::symbol(s).scaled(Rational(static_cast<long>(c)));
  return p;
}

std::optional<Affine> Affine::from_poly(const ConstPoly& p) {
  Affine a;
  for (const auto& [m, c] : p.terms()) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return std::nullopt;
    long long v = c.get_num().get_si();
    if (m.empty()) {
      a.constant = v;
    } else if (m.size() == 1 && m[0].second == 1) {
      a.coeffs.emplace_back(m[0].first, v);
    } else {
      return std::nullopt;
    }
  }
  return a;
}

// ---------------------------------------------------------------- ConstPoly

ConstPoly::ConstPoly(const Rational& c) {
  if (c != 0) terms_.emplace(ConstMonomial{}, c);
}

ConstPoly ConstPoly::symbol(SymbolId s) {
  ConstPoly p;
  p.terms_.emplace(ConstMonomial{{s, 1}}, Rational(1));
  return p;
}

bool ConstPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

std::optional<Rational> ConstPoly::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

int ConstPoly::degree_in(SymbolId s) const {
  int d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [sym, e] : m)
      if (sym == s) d = std::max(d, e);
  return d;
}

int ConstPoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (const auto& [sym, e] : m) t += e;
    d = std::max(d, t);
  }
  return d;
}

ConstPoly ConstPoly::coefficient_of(SymbolId s, int d) const {
  ConstPoly r;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    ConstMonomial rest;
    for (const auto& f : m) {
      if (f.first == s)
        e = f.second;
      else
        rest.push_back(f);
    }
    if (e == d) r.add_term(rest, c);
  }
  return r;
}

std::set<SymbolId> ConstPoly::symbols() const {
  std::set<SymbolId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [s, e] : m) out.insert(s);
  return out;
}

void ConstPoly::add_term(const ConstMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ConstPoly& ConstPoly::operator+=(const ConstPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ConstPoly ConstPoly::operator+(const ConstPoly& o) const {
  ConstPoly r = *this;
  r += o;
  return r;
}

ConstPoly ConstPoly::operator-() const { return scaled(Rational(-1)); }

ConstPoly ConstPoly::operator-(const ConstPoly& o) const { return *this + (-o); }

ConstPoly ConstPoly::operator*(const ConstPoly& o) const {
  ConstPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(multiply(m1, m2), c1 * c2);
  return r;
}

ConstPoly ConstPoly::scaled(const Rational& c) const {
  ConstPoly r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

std::optional<ConstPoly> ConstPoly::divide_exact(const Affine& factor) const {
  if (factor.coeffs.empty()) {
    if (factor.constant == 0) return std::nullopt;
    return scaled(Rational(1) / Rational(static_cast<long>(factor.constant)));
  }
  const SymbolId s = factor.coeffs.front().first;
  const Rational lead(static_cast<long>(factor.coeffs.front().second));
  const ConstPoly divisor = factor.to_poly();
  ConstPoly quotient;
  ConstPoly rem = *this;
  for (int d = rem.degree_in(s); d >= 1; d = rem.degree_in(s)) {
    ConstPoly step = rem.coefficient_of(s, d).scaled(1 / lead) * symbol_power(s, d - 1);
    quotient += step;
    rem = rem - step * divisor;
  }
  if (!rem.is_zero()) return std::nullopt;
  return quotient;
}

Rational ConstPoly::evaluate(const std::function<Rational(SymbolId)>& value) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [s, e] : m) t *= pow(value(s), e);
    sum += t;
  }
  return sum;
}

ConstPoly ConstPoly::substitute(const std::map<SymbolId, Rational>& values) const {
  ConstPoly r;
  for (const auto& [m, c] : terms_) {
    Rational scale = c;
    ConstMonomial rest;
    for (const auto& [s, e] : m) {
      if (auto it = values.find(s); it != values.end())
        scale *= pow(it->second, e);
      else
        rest.emplace_back(s, e);
    }
    r.add_term(rest, scale);
  }
  return r;
}

// ---------------------------------------------------------------- Coefficient

std::optional<Rational> Coefficient::as_rational() const {
  if (!den_.empty()) return std::nullopt;
  return num_.as_rational();
}

ConstPoly Coefficient::denominator_poly() const {
  ConstPoly d(Rational(1));
  for (const auto& [f, e] : den_) d = d * power(f.to_poly(), e);
  return d;
}

std::set<SymbolId> Coefficient::symbols() const {
  auto out = num_.symbols();
  for (const auto& [f, e] : den_)
    for (const auto& [s, c] : f.coeffs) out.insert(s);
  return out;
}

void Coefficient::reduce() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto it = den_.begin(); it != den_.end();) {
    while (it->second > 0) {
      auto q = num_.divide_exact(it->first);
      if (!q) break;
      num_ = std::move(*q);
      --it->second;
    }
    if (it->second == 0)
      it = den_.erase(it);
    else
      ++it;
  }
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  if (den_ == o.den_) {
    Coefficient r;
    r.num_ = num_ + o.num_;
    r.den_ = den_;
    if (!r.den_.empty()) r.reduce();
    return r;
  }
  std::map<Affine, int> common = den_;
  for (const auto& [f, e] : o.den_) common[f] = std::max(common[f], e);
  auto lift = [&](const Coefficient& c) {
    ConstPoly p = c.num_;
    for (const auto& [f, e] : common) {
      auto it = c.den_.find(f);
      int have = it == c.den_.end() ? 0 : it->second;
      p = p * power(f.to_poly(), e - have);
    }
    return p;
  };
  Coefficient r;
  r.num_ = lift(*this) + lift(o);
  r.den_ = std::move(common);
  r.reduce();
  return r;
}

Coefficient Coefficient::operator-() const {
  Coefficient r = *this;
  r.num_ = -num_;
  return r;
}

Coefficient Coefficient::operator-(const Coefficient& o) const { return *this + (-o); }

Coefficient Coefficient::operator*(const Coefficient& o) const {
  Coefficient r;
  r.num_ = num_ * o.num_;
  if (r.num_.is_zero()) return r;
  if (den_.empty() && o.den_.empty()) return r;
  r.den_ = den_;
  for (const auto& [f, e] : o.den_) r.den_[f] += e;
  r.reduce();
  return r;
}

Coefficient Coefficient::reciprocal(const Affine& a) {
  if (a.is_integer()) {
    if (a.constant == 0) throw std::domain_error("division by zero");
    return Coefficient(Rational(1) / Rational(static_cast<long>(a.constant)));
  }
  auto [norm, scale] = normalize_factor(a);
  Coefficient r(Rational(1) / Rational(static_cast<long>(scale)));
  r.den_.emplace(norm, 1);
  return r;
}

std::optional<Coefficient> Coefficient::inverse() const {
  if (num_.is_zero()) return std::nullopt;
  Coefficient inv(denominator_poly());
  if (auto c = num_.as_rational()) return inv * Coefficient(Rational(1) / *c);
  if (num_.terms().size() == 1) {
    const auto& [m, c] = *num_.terms().begin();
    Coefficient r = inv * Coefficient(Rational(1) / c);
    for (const auto& [s, e] : m)
      for (int i = 0; i < e; ++i) r = r * reciprocal(Affine::symbol(s));
    return r;
  }
  if (num_.total_degree() == 1) {
    mpz_class l = 1;
    for (const auto& [m, c] : num_.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    auto a = Affine::from_poly(num_.scaled(Rational(l)));
    if (!a) return std::nullopt;
    return inv * reciprocal(*a) * Coefficient(Rational(l));
  }
  return std::nullopt;
}

Rational Coefficient::evaluate(const std::function<Rational(SymbolId)>& value) const {
  Rational d = 1;
  for (const auto& [f, e] : den_) d *= pow(f.to_poly().evaluate(value), e);
  if (d == 0) throw std::domain_error("coefficient denominator vanishes");
  return num_.evaluate(value) / d;
}

Coefficient Coefficient::substitute(const std::map<SymbolId, Rational>& values) const {
  Coefficient r(num_.substitute(values));
  for (const auto& [f, e] : den_) {
    auto inv = Coefficient(f.to_poly().substitute(values)).inverse();
    if (!inv) throw std::domain_error("coefficient denominator vanishes");
    for (int i = 0; i < e; ++i) r = r * *inv;
  }
  return r;
}

}  // namespace jetvar
