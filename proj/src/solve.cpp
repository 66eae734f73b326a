#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"
#include "jetvar/variational.hpp"

#include <algorithm>
#include <set>

namespace jetvar {

namespace {

// Single function factor of power one, or nullopt.
std::optional<std::size_t> linear_function_factor(const Monomial& m) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < m.factors.size(); ++i) {
    if (!m.factors[i].first.is_function()) continue;
    if (found || m.factors[i].second != 1) return std::nullopt;
    found = i;
  }
  return found;
}

bool has_function_factor(const Monomial& m) {
  return std::any_of(m.factors.begin(), m.factors.end(),
                     [](const auto& f) { return f.first.is_function(); });
}

}  // namespace

std::optional<Expression> integrate_u(const Expression& e) {
  Expression result;
  Expression rem = e;
  for (int guard = 0; !rem.is_zero(); ++guard) {
    if (guard > 500) return std::nullopt;
    // Highest-order linear function term first.
    const Monomial* pick = nullptr;
    const Coefficient* pick_c = nullptr;
    std::size_t pick_index = 0;
    int best_k = 0;
    bool any_function = false;
    for (const auto& [m, c] : rem.terms()) {
      if (!has_function_factor(m)) continue;
      any_function = true;
      auto idx = linear_function_factor(m);
      if (!idx) return std::nullopt;
      int k = m.factors[*idx].first.k;
      if (k > best_k) {
        best_k = k;
        pick = &m;
        pick_c = &c;
        pick_index = *idx;
      }
    }
    Expression step;
    if (pick) {
      Monomial lowered = *pick;
      Atom& f = lowered.factors[pick_index].first;
      f = Atom::function(f.symbol, f.k - 1);
      std::sort(lowered.factors.begin(), lowered.factors.end());
      step = Expression::term(lowered, *pick_c);
    } else if (any_function) {
      return std::nullopt;
    } else {
      const auto& [m, c] = *rem.terms().begin();
      Affine raised = m.u_exp + Affine(1);
      if (raised.is_zero()) return std::nullopt;
      Monomial up = m;
      up.u_exp = raised;
      step = Expression::term(up, c * Coefficient::reciprocal(raised));
    }
    result += step;
    rem -= diff_partial(step, kAtomU);
  }
  if (!(diff_partial(result, kAtomU) == e)) return std::nullopt;
  return result;
}

namespace {

class ConstantNamer {
 public:
  explicit ConstantNamer(std::set<std::string> used) : used_(std::move(used)) {}

  SymbolId fresh(char prefix) {
    int& n = prefix == 'a' ? next_a_ : next_c_;
    for (;; ++n) {
      std::string name = std::string(1, prefix) + std::to_string(n);
      if (used_.insert(name).second) {
        ++n;
        return intern(name);
      }
    }
  }

 private:
  std::set<std::string> used_;
  int next_a_ = 1;
  int next_c_ = 1;
};

struct Candidate {
  std::size_t equation = 0;
  int k = 0;
  Expression value;
  bool homogeneous = true;
};

// eq == alpha * (u^m f)^(k) + S with S free of f and integrable k times.
std::optional<Candidate> exact_derivative_candidate(const Expression& eq, SymbolId f,
                                                    ConstantNamer* namer, bool commit,
                                                    std::vector<SymbolId>* introduced) {
  const int k = eq.max_function_order(f);
  if (k < 1) return std::nullopt;
  Expression lead = diff_plain(eq, Atom::function(f, k));
  if (lead.size() != 1) return std::nullopt;
  const auto& [m, c] = *lead.terms().begin();
  if (!m.factors.empty() || !m.u_exp.is_integer() || m.u_exp.constant < 0) return std::nullopt;
  if (!c.as_rational()) return std::nullopt;
  const int power = static_cast<int>(m.u_exp.constant);
  const Rational alpha = *c.as_rational();

  Expression weighted = Expression::u_power(Affine(power)) * Expression::atom(Atom::function(f, 0));
  Expression candidate = weighted;
  for (int i = 0; i < k; ++i) candidate = diff_partial(candidate, kAtomU);
  Expression rest = eq - candidate.scaled(Coefficient(alpha));
  if (rest.max_function_order(f) >= 0) return std::nullopt;
  Expression integral = rest;
  for (int i = 0; i < k; ++i) {
    auto next = integrate_u(integral);
    if (!next) return std::nullopt;
    integral = *next;
  }
  Candidate cand;
  cand.k = k;
  cand.homogeneous = rest.is_zero();
  if (!commit) return cand;

  Expression weighted_value = integral.scaled(Coefficient(-1 / alpha));
  for (int j = k - 1; j >= 0; --j) {
    SymbolId cj = namer->fresh(cand.homogeneous ? 'a' : 'c');
    introduced->push_back(cj);
    weighted_value += Expression::u_power(Affine(j)).scaled(Coefficient::symbol(cj));
  }
  cand.value = weighted_value * Expression::u_power(Affine(-power));
  return cand;
}

}  // namespace

SolveResult solve_exact_derivative_patterns(const DeterminingSystem& sys,
                                            const std::map<SymbolId, Expression>& seed) {
  SolveResult result;
  ClosedFormFamily& closed = result.solved;
  closed.assignments = seed;

  std::set<std::string> used;
  auto note_constants = [&](const Expression& e) {
    for (const Atom& a : e.atoms())
      if (a.kind == AtomKind::constant) used.insert(symbol_name(a.symbol));
  };
  for (const auto& eq : sys.equations) note_constants(eq.expr);
  for (const auto& [f, e] : seed) note_constants(e);
  ConstantNamer namer(used);

  enum class State { pending, used, redundant };
  std::vector<State> state(sys.equations.size(), State::pending);
  std::vector<Expression> current(sys.equations.size());

  auto assign = [&](SymbolId f, const Expression& value) {
    for (auto& [g, e] : closed.assignments) e = bind_function(e, f, value);
    closed.assignments[f] = value;
  };
  auto force = [&](SymbolId s, const Rational& value) {
    closed.forced_constants[s] = value;
    Bindings b;
    b.constants.emplace(s, value);
    for (auto& [g, e] : closed.assignments) e = substitute(e, b);
  };

  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      if (state[i] != State::pending) continue;
      current[i] = apply_family(sys.equations[i].expr, closed);
      if (current[i].is_zero()) state[i] = State::redundant;
    }

    // Constraints on constants alone.
    for (std::size_t i = 0; i < sys.equations.size() && !progress; ++i) {
      if (state[i] != State::pending || current[i].contains_kind(AtomKind::function)) continue;
      for (const auto& [m, c] : current[i].terms()) {
        const ConstPoly& num = c.numerator();
        if (num.is_constant()) {
          result.inconsistent = true;
          break;
        }
        auto syms = num.symbols();
        if (syms.size() != 1 || num.total_degree() != 1) continue;
        SymbolId s = *syms.begin();
        Rational slope = *num.coefficient_of(s, 1).as_rational();
        Rational offset = *num.coefficient_of(s, 0).as_rational();
        Rational value = -offset / slope;
        force(s, value);
        result.steps.push_back({SolveStep::Pattern::constant_constraint, i, s, Expression(value), 0});
        state[i] = State::used;
        progress = true;
        break;
      }
    }
    if (progress) continue;

    // Algebraic elimination of an underived unknown.
    for (std::size_t i = 0; i < sys.equations.size() && !progress; ++i) {
      if (state[i] != State::pending) continue;
      for (SymbolId f : sys.unknowns) {
        if (closed.assignments.count(f) || current[i].max_function_order(f) != 0) continue;
        const Atom f0 = Atom::function(f, 0);
        Expression coeff = diff_plain(current[i], f0);
        if (coeff.contains(f0)) continue;
        auto inv = coeff.inverse();
        if (!inv) continue;
        Expression rest = current[i] - coeff * Expression::atom(f0);
        Expression value = -rest * *inv;
        assign(f, value);
        result.steps.push_back({SolveStep::Pattern::algebraic, i, f, value, 0});
        state[i] = State::used;
        progress = true;
        break;
      }
    }
    if (progress) continue;

    // (u^m f)^(k) + S = 0, smallest k per function, functions in declaration order.
    for (SymbolId f : sys.unknowns) {
      if (closed.assignments.count(f)) continue;
      std::optional<Candidate> best;
      for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        if (state[i] != State::pending) continue;
        auto cand = exact_derivative_candidate(current[i], f, nullptr, false, nullptr);
        if (cand && (!best || cand->k < best->k)) {
          cand->equation = i;
          best = cand;
        }
      }
      if (!best) continue;
      auto committed = exact_derivative_candidate(current[best->equation], f, &namer, true,
                                                  &closed.constants);
      assign(f, committed->value);
      result.steps.push_back({SolveStep::Pattern::exact_derivative, best->equation, f,
                              committed->value, committed->k});
      state[best->equation] = State::used;
      progress = true;
      break;
    }
  }

  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    if (state[i] == State::redundant) result.redundant.push_back(i);
    if (state[i] == State::pending) {
      result.unsolved.push_back(i);
      result.unsolved_residuals.push_back(current[i]);
    }
  }
  // Steps recorded the value at the time of solving; report final closed forms.
  for (auto& step : result.steps)
    if (step.pattern != SolveStep::Pattern::constant_constraint)
      step.value = closed.assignments.at(step.target);
  for (SymbolId f : sys.unknowns)
    if (!closed.assignments.count(f)) closed.free_functions.push_back(f);
  return result;
}

}  // namespace jetvar
