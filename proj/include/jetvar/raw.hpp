#pragma once

#include "jetvar/expression.hpp"

#include <memory>
#include <string>
#include <vector>

namespace jetvar {

// Unnormalized expression tree as produced by the parser.
struct RawNode;
using RawExpr = std::shared_ptr<const RawNode>;

struct RawNode {
  enum class Op { number, atom, add, mul, neg, pow, div };
  Op op = Op::number;
  Rational value;
  Atom atom;
  std::vector<RawExpr> args;
};

RawExpr raw_number(const Rational& value);
RawExpr raw_atom(const Atom& a);
RawExpr raw_add(std::vector<RawExpr> args);
RawExpr raw_mul(std::vector<RawExpr> args);
RawExpr raw_neg(RawExpr arg);
RawExpr raw_pow(RawExpr base, RawExpr exponent);
RawExpr raw_div(RawExpr num, RawExpr den);

std::string to_string(const RawExpr& e);

// Canonical form of a raw tree. Throws UnsupportedForm for non-affine symbolic
// exponents, symbolic powers of anything but u, and division by expressions other than
// powers of u and nonzero constants.
Expression normalize(const RawExpr& e);

}  // namespace jetvar
