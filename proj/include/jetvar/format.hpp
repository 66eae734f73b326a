#pragma once

#include "jetvar/expression.hpp"

#include <string>

namespace jetvar {

enum class Notation { plain, tex };

// Plain output is accepted back by the problem parser; tex uses u_{xx}, f'(u), \mu.
std::string format(const Expression& e, Notation n);
std::string format(const Coefficient& c, Notation n);
std::string format(const Monomial& m, Notation n);

inline std::string to_plain(const Expression& e) { return format(e, Notation::plain); }
inline std::string to_tex(const Expression& e) { return format(e, Notation::tex); }

}  // namespace jetvar
