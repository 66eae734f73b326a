#include "jetvar/problem.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

namespace jetvar {

// ---------------------------------------------------------------- scalar formulas

struct ScalarFormula::Node {
  enum class Op { number, x, pi, constant, add, sub, mul, div, pow, neg, call };
  Op op = Op::number;
  double value = 0.0;
  std::string text;  // number spelling, function name
  SymbolId symbol = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using SNode = ScalarFormula::Node;
using SNodePtr = std::shared_ptr<const SNode>;

const std::set<std::string> kScalarFunctions = {"sin", "cos", "exp", "sqrt", "tanh"};

double eval_node(const SNode& n, double x, const std::map<SymbolId, Rational>& constants) {
  auto arg = [&](std::size_t i) { return eval_node(*n.args[i], x, constants); };
  switch (n.op) {
    case SNode::Op::number: return n.value;
    case SNode::Op::x: return x;
    case SNode::Op::pi: return std::numbers::pi;
    case SNode::Op::constant: {
      auto it = constants.find(n.symbol);
      if (it == constants.end())
        throw Error("constant " + symbol_name(n.symbol) + " has no numeric value");
      return it->second.get_d();
    }
    case SNode::Op::add: return arg(0) + arg(1);
    case SNode::Op::sub: return arg(0) - arg(1);
    case SNode::Op::mul: return arg(0) * arg(1);
    case SNode::Op::div: return arg(0) / arg(1);
    case SNode::Op::pow: return std::pow(arg(0), arg(1));
    case SNode::Op::neg: return -arg(0);
    case SNode::Op::call:
      if (n.text == "sin") return std::sin(arg(0));
      if (n.text == "cos") return std::cos(arg(0));
      if (n.text == "exp") return std::exp(arg(0));
      if (n.text == "sqrt") return std::sqrt(arg(0));
      return std::tanh(arg(0));
  }
  return 0.0;
}

std::string print_node(const SNode& n) {
  auto wrap = [](const SNode& c) {
    std::string s = print_node(c);
    bool atomic = c.op == SNode::Op::number || c.op == SNode::Op::x || c.op == SNode::Op::pi ||
                  c.op == SNode::Op::constant || c.op == SNode::Op::call;
    return atomic ? s : "(" + s + ")";
  };
  switch (n.op) {
    case SNode::Op::number: return n.text;
    case SNode::Op::x: return "x";
    case SNode::Op::pi: return "pi";
    case SNode::Op::constant: return symbol_name(n.symbol);
    case SNode::Op::add: return wrap(*n.args[0]) + " + " + wrap(*n.args[1]);
    case SNode::Op::sub: return wrap(*n.args[0]) + " - " + wrap(*n.args[1]);
    case SNode::Op::mul: return wrap(*n.args[0]) + "*" + wrap(*n.args[1]);
    case SNode::Op::div: return wrap(*n.args[0]) + "/" + wrap(*n.args[1]);
    case SNode::Op::pow: return wrap(*n.args[0]) + "^" + wrap(*n.args[1]);
    case SNode::Op::neg: return "-" + wrap(*n.args[0]);
    case SNode::Op::call: return n.text + "(" + print_node(*n.args[0]) + ")";
  }
  return "";
}

}  // namespace

double ScalarFormula::operator()(double x, const std::map<SymbolId, Rational>& constants) const {
  if (!root_) throw Error("empty formula");
  return eval_node(*root_, x, constants);
}

std::string ScalarFormula::to_string() const { return root_ ? print_node(*root_) : ""; }

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { ident, number, op, prime, basis, newline, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto continues = [&] {
    if (out.empty()) return true;
    const Token& last = out.back();
    if (last.kind == Tok::newline) return true;
    if (last.kind != Tok::op) return false;
    static const std::set<std::string> joiners = {"+", "-", "*", "/", "^", "=", "(", ",", "{"};
    return joiners.count(last.text) > 0;
  };
  while (i < text.size()) {
    char c = text[i];
    Token tok;
    tok.line = line;
    tok.column = col;
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      if (depth == 0 && !continues()) {
        tok.kind = Tok::newline;
        out.push_back(tok);
      }
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == 'd' && text.substr(i, 3) == "d/d" && i + 3 < text.size() &&
        std::string_view("txu").find(text[i + 3]) != std::string_view::npos &&
        (i + 4 >= text.size() || !ident_char(text[i + 4]))) {
      tok.kind = Tok::basis;
      tok.text = std::string(text.substr(i, 4));
      advance(4);
      out.push_back(tok);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = Tok::ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() &&
                                                        std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      tok.kind = Tok::number;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    if (c == '\'') {
      tok.kind = Tok::prime;
      tok.text = "'";
      advance(1);
      out.push_back(tok);
      continue;
    }
    if (std::string_view("+-*/^=(),;{}").find(c) != std::string_view::npos) {
      if (c == '(') ++depth;
      if (c == ')') depth = std::max(0, depth - 1);
      tok.kind = Tok::op;
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(tok);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------- parser

const std::set<std::string> kReserved = {"u", "v", "x", "t", "diff", "func", "const", "gen",
                                         "numeric", "pi", "density", "set"};

Atom basis_atom(char c) { return Atom::jet(intern(std::string("%d") + c), 0, 0); }

// u_x, u_tx, v_xx, ... -> jet atom
std::optional<Atom> jet_from_name(const std::string& name) {
  if (name != "u" && name != "v" && !(name.size() > 2 && (name[0] == 'u' || name[0] == 'v') && name[1] == '_'))
    return std::nullopt;
  int t = 0, x = 0;
  for (std::size_t i = 2; i < name.size(); ++i) {
    if (name[i] == 't')
      ++t;
    else if (name[i] == 'x')
      ++x;
    else
      return std::nullopt;
  }
  return Atom::jet(name[0] == 'u' ? sym::u : sym::v, t, x);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  std::vector<SymbolId> functions;
  std::vector<SymbolId> constants;

  ProblemFile problem() {
    std::optional<EvolutionEquation> eq;
    std::vector<NamedGenerator> gens;
    std::optional<NumericConfig> numeric;
    while (true) {
      skip_separators();
      if (peek().kind == Tok::end) break;
      const Token& head = peek();
      if (is_word("func")) {
        next();
        declare(functions);
      } else if (is_word("const")) {
        next();
        declare(constants);
      } else if (is_word("gen")) {
        next();
        gens.push_back(generator());
      } else if (is_word("numeric")) {
        next();
        if (numeric) fail("duplicate numeric section", head);
        numeric = numeric_section();
      } else {
        if (eq) fail("a problem has exactly one equation", head);
        eq = equation();
      }
      end_statement();
    }
    if (!eq) fail("missing equation (expected `u_t = ...`)", peek());
    for (const auto& g : gens)
      if (std::count_if(gens.begin(), gens.end(), [&](const auto& o) { return o.name == g.name; }) > 1)
        throw ParseError("duplicate generator name " + g.name, 1, 1);
    return ProblemFile{functions, constants, *eq, std::move(gens), std::move(numeric)};
  }

  Expression single_expression() {
    skip_separators();
    Expression e = symbolic(false);
    skip_separators();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "' after expression", peek());
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_op(const char* s) const { return peek().kind == Tok::op && peek().text == s; }
  bool is_word(const char* s) const { return peek().kind == Tok::ident && peek().text == s; }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }

  void expect_op(const char* s) {
    if (!is_op(s)) fail(std::string("expected '") + s + "', found " + describe(peek()), peek());
    next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "end of input";
    if (t.kind == Tok::newline) return "end of line";
    return "'" + t.text + "'";
  }

  void skip_separators() {
    while (peek().kind == Tok::newline || is_op(";")) next();
  }

  void end_statement() {
    if (peek().kind == Tok::newline || is_op(";") || peek().kind == Tok::end || is_op("}")) return;
    fail("expected end of statement, found " + describe(peek()), peek());
  }

  void declare(std::vector<SymbolId>& into) {
    if (peek().kind != Tok::ident) fail("expected a name to declare", peek());
    while (peek().kind == Tok::ident) {
      const Token& t = next();
      if (kReserved.count(t.text) || kScalarFunctions.count(t.text) || jet_from_name(t.text))
        fail("'" + t.text + "' is reserved", t);
      SymbolId id = intern(t.text);
      if (std::find(functions.begin(), functions.end(), id) != functions.end() ||
          std::find(constants.begin(), constants.end(), id) != constants.end())
        fail("'" + t.text + "' is already declared", t);
      into.push_back(id);
      if (is_op(",")) next();
    }
  }

  bool declared(const std::vector<SymbolId>& list, const std::string& name) const {
    return std::find(list.begin(), list.end(), intern(name)) != list.end();
  }

  // Symbolic expressions ------------------------------------------------------

  Expression symbolic(bool allow_basis) {
    const Token& start = peek();
    RawExpr raw = sum(allow_basis);
    try {
      return normalize(raw);
    } catch (const UnsupportedForm& e) {
      throw UnsupportedForm("line " + std::to_string(start.line) + ", column " +
                            std::to_string(start.column) + ": " + e.what());
    }
  }

  RawExpr sum(bool b) {
    std::vector<RawExpr> terms{product(b)};
    while (is_op("+") || is_op("-")) {
      bool minus = next().text == "-";
      RawExpr t = product(b);
      terms.push_back(minus ? raw_neg(t) : t);
    }
    return terms.size() == 1 ? terms[0] : raw_add(std::move(terms));
  }

  RawExpr product(bool b) {
    RawExpr acc = unary(b);
    while (is_op("*") || is_op("/")) {
      const Token op = next();
      RawExpr rhs = unary(b);
      if (op.text == "*") {
        acc = raw_mul({acc, rhs});
        continue;
      }
      bool invertible = false;
      try {
        invertible = normalize(rhs).inverse().has_value();
      } catch (const UnsupportedForm&) {
      }
      if (!invertible)
        fail("division by " + to_string(rhs) +
                 " is not supported; only powers of u and nonzero constants may divide",
             op);
      acc = raw_div(acc, rhs);
    }
    return acc;
  }

  RawExpr unary(bool b) {
    if (is_op("-")) {
      next();
      return raw_neg(unary(b));
    }
    if (is_op("+")) {
      next();
      return unary(b);
    }
    RawExpr base = primary(b);
    if (is_op("^")) {
      next();
      return raw_pow(base, unary(b));
    }
    return base;
  }

  RawExpr primary(bool allow_basis) {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      next();
      return raw_number(parse_rational(t.text));
    }
    if (is_op("(")) {
      next();
      RawExpr inner = sum(allow_basis);
      expect_op(")");
      return inner;
    }
    if (t.kind == Tok::basis) {
      if (!allow_basis) fail("'" + t.text + "' is only allowed in generator definitions", t);
      next();
      return raw_atom(basis_atom(t.text[3]));
    }
    if (t.kind != Tok::ident) fail("expected an expression, found " + describe(t), t);
    next();
    if (auto jet = jet_from_name(t.text)) return raw_atom(*jet);
    if (t.text == "x") return raw_atom(kAtomX);
    if (t.text == "t") return raw_atom(kAtomT);
    if (t.text == "diff") return diff_call();
    if (declared(functions, t.text)) {
      int k = 0;
      while (peek().kind == Tok::prime) {
        next();
        ++k;
      }
      argument_u();
      return raw_atom(Atom::function(intern(t.text), k));
    }
    if (declared(constants, t.text)) return raw_atom(Atom::constant(intern(t.text)));
    if (t.text == "pi") fail("pi is only available in numeric settings", t);
    fail("undeclared identifier '" + t.text + "'", t);
  }

  void argument_u() {
    expect_op("(");
    if (!is_word("u")) fail("coefficient functions take the argument u", peek());
    next();
    expect_op(")");
  }

  RawExpr diff_call() {
    expect_op("(");
    const Token& f = peek();
    if (f.kind != Tok::ident || !declared(functions, f.text))
      fail("diff expects a declared function name", f);
    next();
    expect_op(",");
    if (!is_word("u")) fail("diff differentiates with respect to u", peek());
    next();
    expect_op(",");
    const Token& n = peek();
    if (n.kind != Tok::number || n.text.find_first_not_of("0123456789") != std::string::npos)
      fail("diff order must be a non-negative integer", n);
    next();
    expect_op(")");
    return raw_atom(Atom::function(intern(f.text), std::stoi(n.text)));
  }

  // Statements ----------------------------------------------------------------

  EvolutionEquation equation() {
    const Token& start = peek();
    Expression lhs = symbolic(false);
    expect_op("=");
    Expression rhs = symbolic(false);
    try {
      const Expression ut = Expression::atom(Atom::jet(sym::u, 1, 0));
      std::optional<EvolutionEquation> eq;
      if (lhs == ut)
        eq.emplace(rhs, functions);
      else
        eq.emplace(EvolutionEquation::from_residual(lhs - rhs, functions));
      if (eq->order() > 4)
        fail("equation order " + std::to_string(eq->order()) + " exceeds 4", start);
      return *eq;
    } catch (const ParseError&) {
      throw;
    } catch (const UnsupportedForm&) {
      throw;
    } catch (const Error& e) {
      fail(e.what(), start);
    }
  }

  NamedGenerator generator() {
    const Token& name = peek();
    if (name.kind != Tok::ident) fail("expected a generator name", name);
    next();
    expect_op("=");
    const Token& start = peek();
    Expression e = symbolic(true);
    const Atom dt = basis_atom('t'), dx = basis_atom('x'), du = basis_atom('u');
    Expression comp[3];
    for (const auto& [m, coeff] : collect_coefficients(e, {dt, dx, du})) {
      int slot = -1;
      if (m.factors.size() == 1 && m.factors[0].second == 1) {
        if (m.factors[0].first == dt) slot = 0;
        if (m.factors[0].first == dx) slot = 1;
        if (m.factors[0].first == du) slot = 2;
      }
      if (slot < 0)
        fail("a generator is a sum of coefficient*d/dt, coefficient*d/dx and coefficient*d/du",
             start);
      comp[slot] = coeff;
    }
    try {
      return {name.text, Generator(comp[0], comp[1], comp[2])};
    } catch (const Error& err) {
      fail(err.what(), start);
    }
  }

  // Numeric section -----------------------------------------------------------

  NumericConfig numeric_section() {
    NumericConfig cfg;
    bool has_l = false, has_u0 = false;
    expect_op("{");
    while (true) {
      skip_separators();
      if (is_op("}")) {
        next();
        break;
      }
      const Token& key = peek();
      if (key.kind != Tok::ident) fail("expected a numeric setting, found " + describe(key), key);
      next();
      if (key.text == "density") {
        const Token& name = peek();
        if (name.kind != Tok::ident) fail("expected a density name", name);
        next();
        expect_op("=");
        cfg.densities.push_back({name.text, symbolic(false)});
      } else if (key.text == "set") {
        const Token& name = peek();
        if (name.kind != Tok::ident || !declared(constants, name.text))
          fail("`set` needs a declared constant", name);
        next();
        expect_op("=");
        const Token& at = peek();
        auto value = symbolic(false).as_rational();
        if (!value) fail("`set` needs a rational value", at);
        cfg.constants[intern(name.text)] = *value;
      } else {
        expect_op("=");
        const Token& at = peek();
        ScalarFormula f(scalar_sum());
        if (key.text == "L") {
          cfg.length = f;
          has_l = true;
        } else if (key.text == "u0") {
          cfg.initial = f;
          has_u0 = true;
        } else if (key.text == "N" || key.text == "dt" || key.text == "t_end") {
          double v = 0.0;
          try {
            v = f(0.0);
          } catch (const Error& e) {
            fail(e.what(), at);
          }
          if (key.text == "N") {
            if (v != std::floor(v) || v < 1) fail("N must be a positive integer", at);
            cfg.points = static_cast<int>(v);
          } else if (key.text == "dt") {
            cfg.dt = v;
          } else {
            cfg.t_end = v;
          }
        } else {
          fail("unknown numeric setting '" + key.text + "'", key);
        }
      }
      if (!is_op("}")) end_statement();
    }
    if (!has_l) fail("numeric section needs L", peek());
    if (!has_u0) fail("numeric section needs u0", peek());
    return cfg;
  }

  SNodePtr make(SNode::Op op, std::vector<SNodePtr> args) {
    auto n = std::make_shared<SNode>();
    n->op = op;
    n->args = std::move(args);
    return n;
  }

  SNodePtr scalar_sum() {
    SNodePtr acc = scalar_product();
    while (is_op("+") || is_op("-")) {
      bool minus = next().text == "-";
      acc = make(minus ? SNode::Op::sub : SNode::Op::add, {acc, scalar_product()});
    }
    return acc;
  }

  SNodePtr scalar_product() {
    SNodePtr acc = scalar_unary();
    while (is_op("*") || is_op("/")) {
      bool div = next().text == "/";
      acc = make(div ? SNode::Op::div : SNode::Op::mul, {acc, scalar_unary()});
    }
    return acc;
  }

  SNodePtr scalar_unary() {
    if (is_op("-")) {
      next();
      return make(SNode::Op::neg, {scalar_unary()});
    }
    if (is_op("+")) {
      next();
      return scalar_unary();
    }
    SNodePtr base = scalar_primary();
    if (is_op("^")) {
      next();
      return make(SNode::Op::pow, {base, scalar_unary()});
    }
    return base;
  }

  SNodePtr scalar_primary() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      next();
      auto n = std::make_shared<SNode>();
      n->op = SNode::Op::number;
      n->text = t.text;
      n->value = std::strtod(t.text.c_str(), nullptr);
      return n;
    }
    if (is_op("(")) {
      next();
      SNodePtr inner = scalar_sum();
      expect_op(")");
      return inner;
    }
    if (t.kind != Tok::ident) fail("expected a numeric formula, found " + describe(t), t);
    next();
    auto n = std::make_shared<SNode>();
    if (t.text == "x") {
      n->op = SNode::Op::x;
    } else if (t.text == "pi") {
      n->op = SNode::Op::pi;
    } else if (kScalarFunctions.count(t.text)) {
      n->op = SNode::Op::call;
      n->text = t.text;
      expect_op("(");
      n->args.push_back(scalar_sum());
      expect_op(")");
    } else if (declared(constants, t.text)) {
      n->op = SNode::Op::constant;
      n->symbol = intern(t.text);
    } else {
      fail("unknown name '" + t.text + "' in numeric formula", t);
    }
    return n;
  }
};

std::string join_names(const std::vector<SymbolId>& ids) {
  std::string out;
  for (SymbolId id : ids) out += (out.empty() ? "" : " ") + symbol_name(id);
  return out;
}

std::string number_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the short spelling when it reads back identically.
  for (int digits = 1; digits < 17; ++digits) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) { return Parser(text).problem(); }

Expression parse_expression(std::string_view text, const std::vector<SymbolId>& functions,
                            const std::vector<SymbolId>& constants) {
  Parser p(text);
  p.functions = functions;
  p.constants = constants;
  return p.single_expression();
}

std::string print_problem(const ProblemFile& p) {
  std::ostringstream out;
  if (!p.functions.empty()) out << "func " << join_names(p.functions) << "\n";
  if (!p.constants.empty()) out << "const " << join_names(p.constants) << "\n";
  out << "u_t = " << to_plain(p.equation.rhs()) << "\n";
  for (const auto& [name, g] : p.generators) {
    std::string body;
    const std::pair<const Expression*, const char*> parts[] = {
        {&g.tau, "d/dt"}, {&g.xi, "d/dx"}, {&g.eta, "d/du"}};
    for (const auto& [comp, basis] : parts) {
      if (comp->is_zero()) continue;
      body += (body.empty() ? "" : " + ") + std::string("(") + to_plain(*comp) + ")*" + basis;
    }
    out << "gen " << name << " = " << (body.empty() ? "0*d/dt" : body) << "\n";
  }
  if (p.numeric) {
    const NumericConfig& n = *p.numeric;
    out << "numeric {\n";
    out << "  L = " << n.length.to_string() << "\n";
    out << "  N = " << n.points << "\n";
    out << "  dt = " << number_text(n.dt) << "\n";
    out << "  t_end = " << number_text(n.t_end) << "\n";
    out << "  u0 = " << n.initial.to_string() << "\n";
    for (const auto& d : n.densities) out << "  density " << d.name << " = " << to_plain(d.expr) << "\n";
    for (const auto& [s, v] : n.constants) out << "  set " << symbol_name(s) << " = " << to_string(v) << "\n";
    out << "}\n";
  }
  return out.str();
}

}  // namespace jetvar
