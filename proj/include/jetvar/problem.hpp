#pragma once

#include "jetvar/expression.hpp"
#include "jetvar/jet.hpp"
#include "jetvar/raw.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jetvar {

// Real-valued formula for numeric settings and initial data (x, pi, sin, cos, exp, sqrt,
// and declared constants bound with `set`).
class ScalarFormula {
 public:
  struct Node;

  ScalarFormula() = default;
  explicit ScalarFormula(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  bool empty() const { return !root_; }
  double operator()(double x, const std::map<SymbolId, Rational>& constants = {}) const;
  std::string to_string() const;

 private:
  std::shared_ptr<const Node> root_;
};

struct NamedGenerator {
  std::string name;
  Generator generator;
};

struct NamedDensity {
  std::string name;
  Expression expr;
};

struct NumericConfig {
  ScalarFormula length;
  int points = 256;
  double dt = 1e-4;
  double t_end = 1.0;
  ScalarFormula initial;
  std::vector<NamedDensity> densities;
  std::map<SymbolId, Rational> constants;  // `set mu = 2`
};

struct ProblemFile {
  std::vector<SymbolId> functions;
  std::vector<SymbolId> constants;
  EvolutionEquation equation;
  std::vector<NamedGenerator> generators;
  std::optional<NumericConfig> numeric;
};

// Grammar (statements end with `;` or a newline; a line continues after an operator or
// inside parentheses; `#` starts a comment):
//   func r p q;            const a1 mu;
//   u_t = <expr>           or   <expr> = 0
//   gen X = t*d/dt - u*d/du
//   numeric { L = 2*pi; N = 256; dt = 1e-4; t_end = 1; u0 = cos(x);
//             density mass = u; set mu = 2 }
// Throws ParseError with line and column, UnsupportedForm for expressions outside the
// kernel's class.
ProblemFile parse_problem(std::string_view text);

// Canonical text accepted by parse_problem.
std::string print_problem(const ProblemFile& p);

// Single expression with the given declarations.
Expression parse_expression(std::string_view text, const std::vector<SymbolId>& functions = {},
                            const std::vector<SymbolId>& constants = {});

}  // namespace jetvar
