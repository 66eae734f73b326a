#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace jetvar {

using SymbolId = std::uint32_t;

// Process-wide name interner. Safe for concurrent use; returned references stay valid
// for the lifetime of the process.
SymbolId intern(std::string_view name);
const std::string& symbol_name(SymbolId id);

namespace sym {
// Pre-interned names; their ids are fixed.
inline constexpr SymbolId t = 0;
inline constexpr SymbolId x = 1;
inline constexpr SymbolId u = 2;
inline constexpr SymbolId v = 3;
}  // namespace sym

enum class AtomKind : std::uint8_t {
  independent,  // x or t
  jet,          // u, u_x, u_tx, v_xx, ...
  function,     // f^(k)(u)
  constant,     // a1, mu, ...
};

// Interned-name atom. For jet atoms `t` and `x` count derivative orders (the multi-index
// is canonical); for function atoms `k` is the derivative order in u.
struct Atom {
  AtomKind kind = AtomKind::constant;
  SymbolId symbol = 0;
  std::uint16_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t k = 0;

  auto operator<=>(const Atom&) const = default;

  static Atom independent(SymbolId s) { return {AtomKind::independent, s, 0, 0, 0}; }
  static Atom jet(SymbolId var, int t_order, int x_order) {
    return {AtomKind::jet, var, static_cast<std::uint16_t>(t_order),
            static_cast<std::uint16_t>(x_order), 0};
  }
  static Atom function(SymbolId name, int order) {
    return {AtomKind::function, name, 0, 0, static_cast<std::uint16_t>(order)};
  }
  static Atom constant(SymbolId name) { return {AtomKind::constant, name, 0, 0, 0}; }

  bool is_jet() const { return kind == AtomKind::jet; }
  bool is_function() const { return kind == AtomKind::function; }
  int jet_order() const { return is_jet() ? t + x : 0; }
  bool is_base(SymbolId var) const { return is_jet() && symbol == var && t == 0 && x == 0; }
};

inline const Atom kAtomU = Atom::jet(sym::u, 0, 0);
inline const Atom kAtomV = Atom::jet(sym::v, 0, 0);
inline const Atom kAtomT = Atom::independent(sym::t);
inline const Atom kAtomX = Atom::independent(sym::x);

// u_t, v_xx, r''(u), mu, ...
std::string atom_name(const Atom& a);

}  // namespace jetvar
