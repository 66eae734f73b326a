#include "jetvar/rational.hpp"
#include "jetvar/symbols.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace jetvar {

namespace {

class SymbolTable {
 public:
  SymbolTable() {
    for (const char* n : {"t", "x", "u", "v"}) insert(n);
  }

  SymbolId intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return insert(name);
  }

  const std::string& name(SymbolId id) {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

 private:
  SymbolId insert(std::string_view name) {
    auto id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::shared_mutex mutex_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, SymbolId> index_;
};

SymbolTable& table() {
  static SymbolTable instance;
  return instance;
}

}  // namespace

SymbolId intern(std::string_view name) { return table().intern(name); }

const std::string& symbol_name(SymbolId id) { return table().name(id); }

std::string atom_name(const Atom& a) {
  const std::string& base = symbol_name(a.symbol);
  switch (a.kind) {
    case AtomKind::independent:
    case AtomKind::constant:
      return base;
    case AtomKind::jet: {
      if (a.t == 0 && a.x == 0) return base;
      return base + "_" + std::string(a.t, 't') + std::string(a.x, 'x');
    }
    case AtomKind::function:
      if (a.k <= 3) return base + std::string(a.k, '\'') + "(u)";
      return "diff(" + base + ",u," + std::to_string(a.k) + ")";
  }
  return base;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.find('/') != std::string::npos) {
    Rational r(s);
    r.canonicalize();
    return r;
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    exponent = std::stol(s.substr(e + 1));
    s = s.substr(0, e);
  }
  std::string digits;
  for (char c : s) {
    if (c == '.') {
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad number: " + s);
    digits += c;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(s.size() - dot - 1);
  }
  Rational r{mpz_class(digits)};
  return r * pow(Rational(10), exponent);
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace jetvar
