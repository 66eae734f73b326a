#include "jetvar/raw.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"

namespace jetvar {

namespace {

RawExpr make(RawNode::Op op, std::vector<RawExpr> args) {
  auto n = std::make_shared<RawNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

}  // namespace

RawExpr raw_number(const Rational& value) {
  auto n = std::make_shared<RawNode>();
  n->op = RawNode::Op::number;
  n->value = value;
  return n;
}

RawExpr raw_atom(const Atom& a) {
  auto n = std::make_shared<RawNode>();
  n->op = RawNode::Op::atom;
  n->atom = a;
  return n;
}

RawExpr raw_add(std::vector<RawExpr> args) { return make(RawNode::Op::add, std::move(args)); }
RawExpr raw_mul(std::vector<RawExpr> args) { return make(RawNode::Op::mul, std::move(args)); }
RawExpr raw_neg(RawExpr arg) { return make(RawNode::Op::neg, {std::move(arg)}); }
RawExpr raw_pow(RawExpr base, RawExpr exponent) {
  return make(RawNode::Op::pow, {std::move(base), std::move(exponent)});
}
RawExpr raw_div(RawExpr num, RawExpr den) {
  return make(RawNode::Op::div, {std::move(num), std::move(den)});
}

std::string to_string(const RawExpr& e) {
  auto join = [&](const char* sep) {
    std::string s = "(";
    for (std::size_t i = 0; i < e->args.size(); ++i) {
      if (i) s += sep;
      s += to_string(e->args[i]);
    }
    return s + ")";
  };
  switch (e->op) {
    case RawNode::Op::number:
      return e->value.get_str();
    case RawNode::Op::atom:
      return atom_name(e->atom);
    case RawNode::Op::add:
      return join(" + ");
    case RawNode::Op::mul:
      return join("*");
    case RawNode::Op::neg:
      return "-" + to_string(e->args[0]);
    case RawNode::Op::pow:
      return to_string(e->args[0]) + "^" + to_string(e->args[1]);
    case RawNode::Op::div:
      return to_string(e->args[0]) + "/" + to_string(e->args[1]);
  }
  return {};
}

Expression normalize(const RawExpr& e) {
  switch (e->op) {
    case RawNode::Op::number:
      return Expression(e->value);
    case RawNode::Op::atom:
      return Expression::atom(e->atom);
    case RawNode::Op::add: {
      Expression s;
      for (const auto& a : e->args) s += normalize(a);
      return s;
    }
    case RawNode::Op::mul: {
      Expression p(1L);
      for (const auto& a : e->args) p = p * normalize(a);
      return p;
    }
    case RawNode::Op::neg:
      return -normalize(e->args[0]);
    case RawNode::Op::div: {
      Expression num = normalize(e->args[0]);
      Expression den = normalize(e->args[1]);
      if (den.is_zero()) throw UnsupportedForm("division by zero in " + to_string(e));
      auto inv = den.inverse();
      if (!inv)
        throw UnsupportedForm("division by " + to_string(e->args[1]) +
                              " is not supported; only powers of u and nonzero constants may "
                              "divide");
      return num * *inv;
    }
    case RawNode::Op::pow: {
      Expression base = normalize(e->args[0]);
      Expression exponent = normalize(e->args[1]);
      auto coeff = exponent.as_coefficient();
      if (!coeff)
        throw UnsupportedForm("exponent must be constant in " + to_string(e));
      if (auto r = coeff->as_rational()) {
        if (r->get_den() != 1 || !r->get_num().fits_sint_p())
          throw UnsupportedForm("non-integer exponent in " + to_string(e));
        return base.pow(static_cast<int>(r->get_num().get_si()));
      }
      std::optional<Affine> sigma;
      if (coeff->denominator().empty()) sigma = Affine::from_poly(coeff->numerator());
      if (!sigma)
        throw UnsupportedForm("non-affine symbolic exponent in " + to_string(e));
      if (base.size() == 1) {
        const auto& [m, c] = *base.terms().begin();
        if (m.factors.empty() && m.u_exp.is_integer() && c.as_rational() == Rational(1)) {
          if (m.u_exp.constant == 0) return Expression(1L);
          return Expression::u_power(*sigma * m.u_exp.constant);
        }
      }
      throw UnsupportedForm("symbolic powers are only supported for u, in " + to_string(e));
    }
  }
  return {};
}

}  // namespace jetvar
