#include "jetvar/format.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace jetvar {

namespace {

bool is_greek(const std::string& s) {
  static const std::array<const char*, 18> names = {
      "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "kappa",
      "lambda", "mu", "nu", "xi", "rho", "sigma", "tau", "phi", "omega"};
  return std::find_if(names.begin(), names.end(), [&](const char* n) { return s == n; }) !=
         names.end();
}

std::string tex_symbol(const std::string& name) {
  if (is_greek(name)) return "\\" + name;
  std::size_t split = name.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
  if (split > 0 && split < name.size())
    return name.substr(0, split) + "_{" + name.substr(split) + "}";
  return name;
}

std::string atom_text(const Atom& a, Notation n) {
  if (n == Notation::plain) return atom_name(a);
  const std::string& base = symbol_name(a.symbol);
  switch (a.kind) {
    case AtomKind::independent:
    case AtomKind::constant:
      return tex_symbol(base);
    case AtomKind::jet:
      if (a.t == 0 && a.x == 0) return base;
      return base + "_{" + std::string(a.t, 't') + std::string(a.x, 'x') + "}";
    case AtomKind::function:
      if (a.k <= 3) return base + std::string(a.k, '\'') + "(u)";
      return base + "^{(" + std::to_string(a.k) + ")}(u)";
  }
  return base;
}

std::string affine_text(const Affine& a, Notation n) {
  std::string s;
  for (const auto& [sym, c] : a.coeffs) {
    std::string name = n == Notation::tex ? tex_symbol(symbol_name(sym)) : symbol_name(sym);
    long long mag = c < 0 ? -c : c;
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    if (mag != 1) s += std::to_string(mag) + (n == Notation::plain ? "*" : " ");
    s += name;
  }
  if (a.constant != 0 || s.empty()) {
    long long mag = a.constant < 0 ? -a.constant : a.constant;
    if (s.empty())
      s = std::to_string(a.constant);
    else
      s += (a.constant < 0 ? " - " : " + ") + std::to_string(mag);
  }
  return s;
}

bool affine_is_atomic(const Affine& a) {
  return (a.coeffs.empty() && a.constant >= 0) ||
         (a.constant == 0 && a.coeffs.size() == 1 && a.coeffs[0].second == 1);
}

std::string power_text(const std::string& base, const std::string& exponent, bool atomic,
                       Notation n) {
  if (n == Notation::tex) return base + "^{" + exponent + "}";
  return base + "^" + (atomic ? exponent : "(" + exponent + ")");
}

std::string const_monomial_text(const ConstMonomial& m, Notation n) {
  std::string s;
  for (const auto& [sym, e] : m) {
    if (!s.empty()) s += n == Notation::plain ? "*" : " ";
    std::string name = n == Notation::tex ? tex_symbol(symbol_name(sym)) : symbol_name(sym);
    s += e == 1 ? name : power_text(name, std::to_string(e), true, n);
  }
  return s;
}

std::string const_poly_text(const ConstPoly& p, Notation n) {
  std::vector<std::pair<ConstMonomial, Rational>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (const auto& f : a.first) da += f.second;
    for (const auto& f : b.first) db += f.second;
    if (da != db) return da > db;
    return const_monomial_text(a.first, n) < const_monomial_text(b.first, n);
  });
  std::string s;
  for (const auto& [m, c] : terms) {
    Rational mag = abs(c);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    std::string mono = const_monomial_text(m, n);
    std::string num;
    if (n == Notation::tex && mag.get_den() != 1)
      num = "\\frac{" + mag.get_num().get_str() + "}{" + mag.get_den().get_str() + "}";
    else
      num = mag.get_str();
    if (mono.empty())
      s += num;
    else if (mag == 1)
      s += mono;
    else
      s += num + (n == Notation::plain ? "*" : " ") + mono;
  }
  return s.empty() ? "0" : s;
}

struct TermPieces {
  bool negative = false;
  Rational scalar = 1;         // positive
  std::string const_factor;    // symbolic numerator, possibly parenthesized
  std::vector<std::string> den;  // symbolic denominator factors
};

TermPieces coefficient_pieces(const Coefficient& c, Notation n) {
  TermPieces p;
  const auto& num = c.numerator();
  if (num.terms().size() == 1) {
    const auto& [m, r] = *num.terms().begin();
    p.negative = r < 0;
    p.scalar = abs(r);
    p.const_factor = const_monomial_text(m, n);
  } else {
    p.const_factor = "(" + const_poly_text(num, n) + ")";
  }
  for (const auto& [f, e] : c.denominator()) {
    std::string text = affine_is_atomic(f) ? affine_text(f, n) : "(" + affine_text(f, n) + ")";
    if (n == Notation::tex && !affine_is_atomic(f)) text = affine_text(f, n);
    for (int i = 0; i < e; ++i) p.den.push_back(text);
  }
  return p;
}

std::vector<std::string> monomial_factors(const Monomial& m, Notation n, Affine* negative_u) {
  std::vector<std::pair<int, std::string>> parts;  // (group, text)
  auto with_power = [&](const std::string& base, int p) {
    return p == 1 ? base : power_text(base, std::to_string(p), true, n);
  };
  for (const auto& [a, p] : m.factors) {
    int group = a.kind == AtomKind::function ? 0 : a.kind == AtomKind::independent ? 1 : 3;
    parts.emplace_back(group, with_power(atom_text(a, n), p));
  }
  if (!m.u_exp.is_zero()) {
    if (m.u_exp.is_integer() && m.u_exp.constant < 0 && negative_u) {
      *negative_u = -m.u_exp;
    } else if (m.u_exp.is_integer()) {
      parts.emplace_back(2, with_power("u", static_cast<int>(m.u_exp.constant)));
    } else {
      parts.emplace_back(2, power_text("u", affine_text(m.u_exp, n), affine_is_atomic(m.u_exp), n));
    }
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [g, s] : parts) out.push_back(std::move(s));
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

// Term text without its sign.
std::string term_text(const Monomial& m, const Coefficient& c, Notation n, bool* negative) {
  TermPieces p = coefficient_pieces(c, n);
  *negative = p.negative;
  Affine neg_u;
  std::vector<std::string> factors = monomial_factors(m, n, &neg_u);
  if (!neg_u.is_zero()) {
    std::string u = neg_u.constant == 1 ? "u" : power_text("u", std::to_string(neg_u.constant), true, n);
    p.den.push_back(u);
  }
  if (n == Notation::plain) {
    std::vector<std::string> parts;
    if (p.scalar != 1 || (p.const_factor.empty() && factors.empty())) parts.push_back(p.scalar.get_str());
    if (!p.const_factor.empty()) parts.push_back(p.const_factor);
    parts.insert(parts.end(), factors.begin(), factors.end());
    std::string s = join(parts, "*");
    for (const auto& d : p.den) s += "/" + d;
    return s;
  }
  std::string num;
  if (p.scalar.get_num() != 1 || (p.const_factor.empty() && (factors.empty() || p.scalar.get_den() != 1 || !p.den.empty())))
    num = p.scalar.get_num().get_str();
  if (!p.const_factor.empty()) num += (num.empty() ? "" : " ") + p.const_factor;
  std::vector<std::string> den_parts;
  if (p.scalar.get_den() != 1) den_parts.push_back(p.scalar.get_den().get_str());
  den_parts.insert(den_parts.end(), p.den.begin(), p.den.end());
  std::string body = join(factors, " ");
  if (den_parts.empty()) {
    if (num.empty()) return body.empty() ? "1" : body;
    return body.empty() ? num : num + " " + body;
  }
  std::string den;
  for (const auto& d : den_parts) {
    bool compound = d.find(' ') != std::string::npos;
    if (!den.empty()) den += " ";
    den += compound && den_parts.size() > 1 ? "(" + d + ")" : d;
  }
  std::string frac = "\\frac{" + (num.empty() ? std::string("1") : num) + "}{" + den + "}";
  return body.empty() ? frac : frac + " " + body;
}

}  // namespace

std::string format(const Monomial& m, Notation n) {
  if (m.is_one()) return "1";
  bool neg = false;
  return term_text(m, Coefficient(1L), n, &neg);
}

std::string format(const Coefficient& c, Notation n) {
  return format(Expression(c), n);
}

std::string format(const Expression& e, Notation n) {
  if (e.is_zero()) return "0";
  struct Entry {
    int weight;
    std::string key;
    bool negative;
    std::string text;
  };
  std::vector<Entry> entries;
  for (const auto& [m, c] : e.terms()) {
    Entry en;
    en.weight = m.jet_weight();
    en.key = format(m, Notation::plain);
    en.text = term_text(m, c, n, &en.negative);
    entries.push_back(std::move(en));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.key < b.key;
  });
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& en = entries[i];
    if (i == 0)
      os << (en.negative ? "-" : "") << en.text;
    else
      os << (en.negative ? " - " : " + ") << en.text;
  }
  return os.str();
}

}  // namespace jetvar
