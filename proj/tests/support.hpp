#pragma once

#include "jetvar/expression.hpp"
#include "jetvar/format.hpp"
#include "jetvar/jet.hpp"
#include "jetvar/problem.hpp"
#include "jetvar/raw.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using namespace jetvar;

inline Expression U() { return Expression::atom(kAtomU); }
inline Expression V() { return Expression::atom(kAtomV); }
inline Expression jet(int t, int x) { return Expression::atom(Atom::jet(sym::u, t, x)); }
inline Expression vjet(int t, int x) { return Expression::atom(Atom::jet(sym::v, t, x)); }
inline Expression X() { return Expression::atom(kAtomX); }
inline Expression T() { return Expression::atom(kAtomT); }
inline Expression fn(const char* name, int k = 0) {
  return Expression::atom(Atom::function(intern(name), k));
}
inline Expression cst(const char* name) { return Expression::atom(Atom::constant(intern(name))); }
inline Expression q(long n, long d = 1) { return Expression(make_rational(n, d)); }

inline std::vector<SymbolId> ids(std::initializer_list<const char*> names) {
  std::vector<SymbolId> out;
  for (const char* n : names) out.push_back(intern(n));
  return out;
}

// Parse with the usual declarations of the test corpus.
inline Expression P(const std::string& text) {
  static const auto funcs = ids({"r", "p", "q", "a", "b", "f", "g", "h", "d"});
  static const auto consts = ids({"a1", "a2", "a3", "c1", "c2", "mu", "eps"});
  return parse_expression(text, funcs, consts);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string problem_path(const std::string& name) {
  return std::string(JETVAR_PROBLEM_DIR) + "/" + name;
}

inline ProblemFile load_problem(const std::string& name) {
  return parse_problem(read_file(problem_path(name)));
}

// ---------------------------------------------------------------- random expressions

struct ExprGen {
  std::mt19937 rng;
  int max_order = 2;
  bool with_t_jets = true;
  bool with_v = false;
  bool with_functions = true;
  bool with_symbolic_power = true;

  explicit ExprGen(unsigned seed) : rng(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  RawExpr leaf() {
    switch (uniform(0, 9)) {
      case 0: return raw_number(make_rational(uniform(-3, 3), 1));
      case 1: return raw_number(make_rational(uniform(-5, 5), uniform(1, 4)));
      case 2: return raw_atom(kAtomU);
      case 3: {
        int x = uniform(1, max_order);
        int t = with_t_jets && uniform(0, 2) == 0 ? 1 : 0;
        if (t + x > max_order) x = max_order - t;
        return raw_atom(Atom::jet(sym::u, t, std::max(x, t == 0 ? 1 : 0)));
      }
      case 4: return raw_atom(uniform(0, 1) ? kAtomX : kAtomT);
      case 5:
        if (with_functions) return raw_atom(Atom::function(intern(uniform(0, 1) ? "r" : "q"), uniform(0, 2)));
        return raw_atom(kAtomU);
      case 6: return raw_atom(Atom::constant(intern(uniform(0, 1) ? "a1" : "mu")));
      case 7:
        if (with_v) return raw_atom(uniform(0, 1) ? kAtomV : Atom::jet(sym::v, 0, uniform(1, max_order)));
        return raw_atom(Atom::jet(sym::u, 0, 1));
      case 8:
        if (with_symbolic_power)
          return raw_pow(raw_atom(kAtomU),
                         raw_add({raw_atom(Atom::constant(intern("mu"))), raw_number(uniform(-1, 2))}));
        return raw_atom(kAtomU);
      default: return raw_pow(raw_atom(kAtomU), raw_number(-1));
    }
  }

  RawExpr tree(int depth) {
    if (depth <= 0) return leaf();
    switch (uniform(0, 5)) {
      case 0:
      case 1: return raw_add({tree(depth - 1), tree(depth - 1), uniform(0, 1) ? tree(depth - 2) : leaf()});
      case 2:
      case 3: return raw_mul({tree(depth - 1), tree(depth - 1)});
      case 4: return raw_neg(tree(depth - 1));
      default: return raw_pow(tree(depth - 2), raw_number(uniform(0, 3)));
    }
  }

  Expression expression(int depth = 3) { return normalize(tree(depth)); }
};

// ---------------------------------------------------------------- exact evaluation

// Independent rational values for every atom; symbolic constants get small integers so
// that symbolic exponents evaluate to integers.
struct RandomValuation {
  std::map<Atom, Rational> atoms;
  std::map<SymbolId, Rational> constants;
  std::mt19937 rng;

  explicit RandomValuation(unsigned seed) : rng(seed) {}

  Rational atom(const Atom& a) {
    auto it = atoms.find(a);
    if (it != atoms.end()) return it->second;
    std::uniform_int_distribution<int> num(1, 9), den(1, 5), sign(0, 1);
    Rational v = make_rational(num(rng) * (sign(rng) ? 1 : -1), den(rng));
    atoms.emplace(a, v);
    return v;
  }
  Rational constant(SymbolId s) {
    auto it = constants.find(s);
    if (it != constants.end()) return it->second;
    Rational v(std::uniform_int_distribution<int>(1, 3)(rng));
    constants.emplace(s, v);
    return v;
  }
  Valuation valuation() {
    return {[this](const Atom& a) { return atom(a); }, [this](SymbolId s) { return constant(s); }};
  }
};

inline Rational eval_raw(const RawExpr& e, RandomValuation& val) {
  switch (e->op) {
    case RawNode::Op::number: return e->value;
    case RawNode::Op::atom:
      return e->atom.kind == AtomKind::constant ? val.constant(e->atom.symbol) : val.atom(e->atom);
    case RawNode::Op::add: {
      Rational s = 0;
      for (const auto& a : e->args) s += eval_raw(a, val);
      return s;
    }
    case RawNode::Op::mul: {
      Rational p = 1;
      for (const auto& a : e->args) p *= eval_raw(a, val);
      return p;
    }
    case RawNode::Op::neg: return -eval_raw(e->args[0], val);
    case RawNode::Op::pow: {
      Rational ex = eval_raw(e->args[1], val);
      return jetvar::pow(eval_raw(e->args[0], val), ex.get_num().get_si());
    }
    case RawNode::Op::div: return eval_raw(e->args[0], val) / eval_raw(e->args[1], val);
  }
  return 0;
}

// ---------------------------------------------------------------- dual-number oracle

struct Dual {
  Rational v, d;
};
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Dual dual_pow(const Dual& a, long n) {
  if (n == 0) return {1, 0};
  Rational p = jetvar::pow(a.v, n - 1);
  return {p * a.v, Rational(n) * p * a.d};
}

// u(x, t) as a polynomial with rational coefficients; r(u), q(u) as polynomials in u.
struct PolySolution {
  std::map<std::pair<int, int>, Rational> coeffs;  // (i, j) -> c x^i t^j
  std::map<SymbolId, std::vector<Rational>> functions;
  Rational x0, t0;

  Rational derivative(int dt, int dx) const {
    Rational s = 0;
    for (const auto& [ij, c] : coeffs) {
      auto [i, j] = ij;
      if (i < dx || j < dt) continue;
      Rational f = c;
      for (int k = 0; k < dx; ++k) f *= i - k;
      for (int k = 0; k < dt; ++k) f *= j - k;
      s += f * jetvar::pow(x0, i - dx) * jetvar::pow(t0, j - dt);
    }
    return s;
  }

  Rational function(SymbolId name, int k, const Rational& u) const {
    const auto& c = functions.at(name);
    Rational s = 0;
    for (std::size_t n = k; n < c.size(); ++n) {
      Rational f = c[n];
      for (int m = 0; m < k; ++m) f *= static_cast<long>(n) - m;
      s += f * jetvar::pow(u, static_cast<long>(n) - k);
    }
    return s;
  }

  // Value and derivative along x (wrt_t false) or t of an atom.
  Dual atom(const Atom& a, bool wrt_t) const {
    if (a == kAtomX) return {x0, wrt_t ? 0 : 1};
    if (a == kAtomT) return {t0, wrt_t ? 1 : 0};
    if (a.is_jet()) return {derivative(a.t, a.x), derivative(a.t + (wrt_t ? 1 : 0), a.x + (wrt_t ? 0 : 1))};
    if (a.is_function()) {
      Rational u = derivative(0, 0);
      Rational du = derivative(wrt_t ? 1 : 0, wrt_t ? 0 : 1);
      return {function(a.symbol, a.k, u), function(a.symbol, a.k + 1, u) * du};
    }
    return {0, 0};
  }
};

inline PolySolution random_solution(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-4, 4);
  PolySolution s;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 3; ++j)
      if (c(rng) > 1) s.coeffs[{i, j}] = Rational(c(rng));
  s.coeffs[{0, 0}] = Rational(c(rng) + 11);
  for (const char* f : {"r", "q"}) {
    std::vector<Rational> poly;
    for (int n = 0; n < 5; ++n) poly.push_back(Rational(c(rng)));
    s.functions[intern(f)] = poly;
  }
  s.x0 = make_rational(c(rng), 3);
  s.t0 = make_rational(c(rng), 2);
  return s;
}

inline Dual eval_dual(const Expression& e, const PolySolution& sol, bool wrt_t,
                      const std::map<SymbolId, Rational>& constants) {
  auto cval = [&](SymbolId s) { return constants.at(s); };
  Dual total{0, 0};
  const Dual u = sol.atom(kAtomU, wrt_t);
  for (const auto& [m, c] : e.terms()) {
    Dual term{c.evaluate(cval), 0};
    Rational ex(static_cast<long>(m.u_exp.constant));
    for (const auto& [s, k] : m.u_exp.coeffs) ex += Rational(static_cast<long>(k)) * cval(s);
    term = term * dual_pow(u, ex.get_num().get_si());
    for (const auto& [a, p] : m.factors) term = term * dual_pow(sol.atom(a, wrt_t), p);
    total.v += term.v;
    total.d += term.d;
  }
  return total;
}

inline Rational eval_on(const Expression& e, const PolySolution& sol,
                        const std::map<SymbolId, Rational>& constants) {
  return eval_dual(e, sol, false, constants).v;
}

}  // namespace testing
