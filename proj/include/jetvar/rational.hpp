#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace jetvar {

// Exact coefficient field of the symbolic kernel.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Parses "12", "3/4", "1.25" or "1e-4" exactly.
Rational parse_rational(std::string_view text);

// Integer power with exact result; negative exponents invert.
Rational pow(const Rational& base, long exponent);

}  // namespace jetvar
