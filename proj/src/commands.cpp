#include "jetvar/commands.hpp"

#include "jetvar/conslaw.hpp"
#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"
#include "jetvar/numverify.hpp"
#include "jetvar/variational.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>

namespace jetvar {

namespace {

using Json = nlohmann::ordered_json;

class Report {
 public:
  Report(const CommandOptions& opt, std::ostream& out) : opt_(opt), out_(out) {}

  bool records() const { return opt_.format == OutputFormat::records; }
  bool tex() const { return opt_.format == OutputFormat::tex; }

  std::string ex(const Expression& e) const {
    return format(e, tex() ? Notation::tex : Notation::plain);
  }
  std::string co(const Coefficient& c) const {
    return format(c, tex() ? Notation::tex : Notation::plain);
  }
  std::string mono(const Monomial& m) const {
    return format(m, tex() ? Notation::tex : Notation::plain);
  }

  // Displayed equation in plain or tex form.
  void math(const std::string& lhs, const std::string& rhs) {
    if (tex())
      out_ << "\\[ " << lhs << " = " << rhs << " \\]\n";
    else
      out_ << lhs << " = " << rhs << "\n";
  }
  void text(const std::string& s) { out_ << (tex() ? "% " : "") << s << "\n"; }
  void record(const Json& j) { out_ << j.dump() << "\n"; }

  std::string flag(bool ok, const char* yes = "yes", const char* no = "no") const {
    if (!opt_.color) return ok ? yes : no;
    return std::string(ok ? "\033[32m" : "\033[31m") + (ok ? yes : no) + "\033[0m";
  }

 private:
  const CommandOptions& opt_;
  std::ostream& out_;
};

std::string plain(const Expression& e) { return to_plain(e); }

std::string names(const std::vector<SymbolId>& ids) {
  std::string s;
  for (SymbolId id : ids) s += (s.empty() ? "" : " ") + symbol_name(id);
  return s;
}

Json name_list(const std::vector<SymbolId>& ids) {
  Json a = Json::array();
  for (SymbolId id : ids) a.push_back(symbol_name(id));
  return a;
}

std::string equation_text(const Report& r, const EvolutionEquation& eq) {
  return (r.tex() ? "u_{t} = " : "u_t = ") + r.ex(eq.rhs());
}

int cmd_adjoint(const ProblemFile& p, Report& r) {
  AdjointResult a = adjoint(p.equation);
  if (r.records()) {
    r.record({{"kind", "adjoint"},
              {"equation", plain(p.equation.rhs())},
              {"adjoint", plain(a.adjoint)},
              {"adjoint_at_v_eq_u", plain(a.adjoint_at_v_eq_u)},
              {"order", a.order}});
    return exit_code::ok;
  }
  r.text("equation: " + equation_text(r, p.equation));
  r.math(r.tex() ? "F^{*}" : "F*", r.ex(a.adjoint));
  r.math(r.tex() ? "F^{*}|_{v=u}" : "F*|_{v=u}", r.ex(a.adjoint_at_v_eq_u));
  r.text("order: " + std::to_string(a.order));
  return exit_code::ok;
}

int cmd_check_sa(const ProblemFile& p, Report& r) {
  SelfAdjointnessReport s = self_adjointness_test(p.equation);
  if (r.records()) {
    r.record({{"kind", "self_adjointness"},
              {"equation", plain(p.equation.rhs())},
              {"self_adjoint", s.is_self_adjoint},
              {"phi", s.phi ? Json(plain(*s.phi)) : Json(nullptr)},
              {"residual", plain(s.residual)}});
    return exit_code::ok;
  }
  if (s.is_self_adjoint) {
    r.text(r.flag(true, "self-adjoint", "") + ", phi = " + r.ex(*s.phi));
  } else if (s.phi) {
    r.text(r.flag(false, "", "not self-adjoint") + ", phi = " + r.ex(*s.phi));
    r.math("residual", r.ex(s.residual));
  } else {
    r.text(r.flag(false, "", "not self-adjoint") + ", phi undetermined (no u_t term)");
    r.math(r.tex() ? "F^{*}|_{v=u}" : "F*|_{v=u}", r.ex(s.residual));
  }
  return exit_code::ok;
}

void require_unknowns(const ProblemFile& p) {
  if (p.equation.unknown_functions().empty())
    throw UnsupportedForm("the equation declares no unknown functions (use `func ...`)");
}

int cmd_detsys(const ProblemFile& p, Report& r) {
  require_unknowns(p);
  DeterminingSystem sys = determining_system(p.equation);
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    const auto& eq = sys.equations[i];
    if (r.records())
      r.record({{"kind", "determining_equation"},
                {"index", i + 1},
                {"source", format(eq.source, Notation::plain)},
                {"expr", plain(eq.expr)}});
    else
      r.math("(" + std::to_string(i + 1) + ") [" + r.mono(eq.source) + "]  " + r.ex(eq.expr), "0");
  }
  if (r.records())
    r.record({{"kind", "determining_system"},
              {"count", sys.equations.size()},
              {"unknowns", name_list(sys.unknowns)}});
  else
    r.text(std::to_string(sys.equations.size()) + " equations in " + names(sys.unknowns));
  return exit_code::ok;
}

const char* pattern_name(SolveStep::Pattern p) {
  switch (p) {
    case SolveStep::Pattern::algebraic: return "algebraic";
    case SolveStep::Pattern::exact_derivative: return "exact_derivative";
    case SolveStep::Pattern::constant_constraint: return "constant_constraint";
  }
  return "unknown";
}

int cmd_classify(const ProblemFile& p, Report& r) {
  require_unknowns(p);
  DeterminingSystem sys = determining_system(p.equation);
  SolveResult res = solve_exact_derivative_patterns(sys);
  FamilyCheck check = verify_family(p.equation, res.solved);
  auto source = [&](std::size_t i) { return format(sys.equations[i].source, Notation::plain); };

  if (r.records()) {
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
      const SolveStep& s = res.steps[i];
      r.record({{"kind", "solve_step"},
                {"index", i + 1},
                {"pattern", pattern_name(s.pattern)},
                {"equation", s.equation + 1},
                {"source", source(s.equation)},
                {"target", symbol_name(s.target)},
                {"value", plain(s.value)},
                {"derivative_order", s.derivative_order}});
    }
    for (SymbolId f : sys.unknowns) {
      auto it = res.solved.assignments.find(f);
      if (it != res.solved.assignments.end())
        r.record({{"kind", "assignment"}, {"function", symbol_name(f)}, {"value", plain(it->second)}});
    }
    for (const auto& [c, v] : res.solved.forced_constants)
      r.record({{"kind", "forced_constant"}, {"constant", symbol_name(c)}, {"value", to_string(v)}});
    for (std::size_t i : res.redundant)
      r.record({{"kind", "redundant"}, {"equation", i + 1}, {"source", source(i)}});
    for (std::size_t k = 0; k < res.unsolved.size(); ++k)
      r.record({{"kind", "unsolved"},
                {"equation", res.unsolved[k] + 1},
                {"source", source(res.unsolved[k])},
                {"residual", plain(res.unsolved_residuals[k])}});
    r.record({{"kind", "classification"},
              {"free_functions", name_list(res.solved.free_functions)},
              {"constants", name_list(res.solved.constants)},
              {"inconsistent", res.inconsistent},
              {"verified", check.holds},
              {"residual", plain(check.residual)}});
  } else {
    for (SymbolId f : sys.unknowns) {
      auto it = res.solved.assignments.find(f);
      if (it != res.solved.assignments.end()) r.math(symbol_name(f), r.ex(it->second));
    }
    for (const auto& [c, v] : res.solved.forced_constants)
      r.math(symbol_name(c), to_string(v));
    r.text("free functions: " + (res.solved.free_functions.empty() ? std::string("none")
                                                                   : names(res.solved.free_functions)));
    r.text("integration constants: " +
           (res.solved.constants.empty() ? std::string("none") : names(res.solved.constants)));
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
      const SolveStep& s = res.steps[i];
      r.text("step " + std::to_string(i + 1) + ": " + pattern_name(s.pattern) + " on equation " +
             std::to_string(s.equation + 1) + " [" + source(s.equation) + "] gives " +
             symbol_name(s.target));
    }
    for (std::size_t i : res.redundant)
      r.text("redundant: equation " + std::to_string(i + 1) + " [" + source(i) + "]");
    for (std::size_t k = 0; k < res.unsolved.size(); ++k)
      r.text("unsolved: equation " + std::to_string(res.unsolved[k] + 1) + ": " +
             r.ex(res.unsolved_residuals[k]) + " = 0");
    if (res.inconsistent) r.text("inconsistent: a nonzero constant must vanish");
    r.text("self-adjoint family verified: " + r.flag(check.holds));
  }
  return check.holds && !res.inconsistent ? exit_code::ok : exit_code::verification;
}

Json vector_json(const std::string& gen, const ConservedVector& cv, bool symmetry) {
  return {{"kind", "conserved_vector"},
          {"generator", gen},
          {"stage", stage_name(cv.stage)},
          {"c0", plain(cv.c0)},
          {"c1", plain(cv.c1)},
          {"verified", cv.verified},
          {"symmetry", symmetry},
          {"unverified_premise", cv.unverified_premise},
          {"capped", cv.capped}};
}

struct Derived {
  std::string name;
  bool symmetry = false;
  ConservedVector raw, specialized, reduced;
};

std::vector<Derived> derive_all(const ProblemFile& p) {
  std::vector<Derived> out;
  for (const auto& [name, g] : p.generators) {
    ConservedVector raw = conserved_vector(p.equation, g);
    ConservedVector sp = specialize_v(raw);
    verify_divergence(sp);
    ConservedVector red = reduce_trivial(sp);
    out.push_back({name, verify_point_symmetry(g, p.equation).holds, raw, sp, red});
  }
  return out;
}

int cmd_conslaw(const ProblemFile& p, Report& r, std::ostream& err) {
  if (p.generators.empty()) throw Error("conslaw needs at least one `gen` line");
  std::vector<Derived> all = derive_all(p);
  bool all_ok = true;
  for (const Derived& d : all) {
    if (d.specialized.unverified_premise)
      err << "warning: the equation is not self-adjoint; v = u is unjustified for " << d.name << "\n";
    if (!d.symmetry) err << "warning: " << d.name << " is not a point symmetry of the equation\n";
    all_ok = all_ok && d.reduced.verified;
    if (r.records()) {
      r.record(vector_json(d.name, d.raw, d.symmetry));
      r.record(vector_json(d.name, d.specialized, d.symmetry));
      r.record(vector_json(d.name, d.reduced, d.symmetry));
      continue;
    }
    r.text("generator " + d.name + " (point symmetry: " + r.flag(d.symmetry) + ")");
    for (const ConservedVector* cv : {&d.raw, &d.specialized, &d.reduced}) {
      std::string stage = stage_name(cv->stage);
      r.math("  " + stage + " C0", r.ex(cv->c0));
      r.math("  " + stage + " C1", r.ex(cv->c1));
    }
    r.text("  reduced vector verified: " + r.flag(d.reduced.verified) +
           (d.reduced.unverified_premise ? " (unverified premise)" : "") +
           (d.reduced.capped ? " (reduction capped)" : ""));
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      Equivalence e = equivalent_up_to_trivial(all[i].reduced, all[j].reduced);
      if (r.records()) {
        r.record({{"kind", "equivalence"},
                  {"first", all[i].name},
                  {"second", all[j].name},
                  {"equivalent", e.equivalent},
                  {"scale", e.scale ? Json(format(*e.scale, Notation::plain)) : Json(nullptr)}});
      } else if (e.equivalent) {
        r.text(all[j].name + " gives no new law: its density is " + r.co(*e.scale) + " times that of " +
               all[i].name);
      } else {
        r.text(all[i].name + " and " + all[j].name + " give inequivalent densities");
      }
    }
  return all_ok ? exit_code::ok : exit_code::verification;
}

int cmd_verify_symmetry(const ProblemFile& p, Report& r) {
  if (p.generators.empty()) throw Error("verify-symmetry needs at least one `gen` line");
  bool all = true;
  for (const auto& [name, g] : p.generators) {
    SymmetryCheck c = verify_point_symmetry(g, p.equation);
    all = all && c.holds;
    if (r.records()) {
      r.record({{"kind", "symmetry_check"},
                {"generator", name},
                {"holds", c.holds},
                {"residual", plain(c.residual)}});
    } else {
      r.text(name + ": point symmetry " + r.flag(c.holds));
      if (!c.holds) r.math("  residual", r.ex(c.residual));
    }
  }
  return all ? exit_code::ok : exit_code::verification;
}

int cmd_numcheck(const ProblemFile& p, Report& r) {
  if (!p.numeric) throw Error("numcheck needs a `numeric { ... }` section");
  const NumericConfig& cfg = *p.numeric;
  GridSpec grid;
  grid.length = cfg.length(0.0, cfg.constants);
  grid.points = cfg.points;
  grid.dt = cfg.dt;
  grid.t_end = cfg.t_end;
  std::vector<double> u0 = sample([&](double x) { return cfg.initial(x, cfg.constants); }, grid);
  Trajectory traj = integrate(p.equation, grid, u0, cfg.constants);

  std::vector<NamedDensity> densities = cfg.densities;
  for (const Derived& d : derive_all(p))
    if (d.reduced.verified && d.reduced.c0.max_x_order(sym::u) <= 2)
      densities.push_back({d.name + ".C0", d.reduced.c0});
  if (r.records())
    r.record({{"kind", "numeric_run"},
              {"length", grid.length},
              {"points", grid.points},
              {"dt", grid.dt},
              {"t_end", grid.t_end},
              {"snapshots", traj.times.size()}});
  else
    r.text("grid: L = " + std::to_string(grid.length) + ", N = " + std::to_string(grid.points) +
           ", dt = " + std::to_string(grid.dt) + ", t_end = " + std::to_string(grid.t_end));
  for (const NamedDensity& d : densities) {
    DensityTrace tr = density_drift(traj, d.expr, cfg.constants);
    if (r.records()) {
      r.record({{"kind", "density_trace"},
                {"name", d.name},
                {"density", plain(d.expr)},
                {"initial", tr.integrals.front()},
                {"absolute_drift", tr.absolute_drift},
                {"relative_drift", tr.relative_drift},
                {"times", tr.times},
                {"integrals", tr.integrals}});
    } else {
      std::ostringstream s;
      s.precision(3);
      s << std::scientific << d.name << " [" << r.ex(d.expr) << "]: I(0) = " << tr.integrals.front()
        << ", relative drift = " << tr.relative_drift;
      r.text(s.str());
    }
  }
  return exit_code::ok;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"adjoint",  "check-sa",        "detsys",  "classify",
                                                 "conslaw", "verify-symmetry", "numcheck"};
  return names;
}

int run_command(const std::string& command, const ProblemFile& problem,
                const CommandOptions& options, std::ostream& out, std::ostream& err) {
  Report r(options, out);
  if (command == "adjoint") return cmd_adjoint(problem, r);
  if (command == "check-sa") return cmd_check_sa(problem, r);
  if (command == "detsys") return cmd_detsys(problem, r);
  if (command == "classify") return cmd_classify(problem, r);
  if (command == "conslaw") return cmd_conslaw(problem, r, err);
  if (command == "verify-symmetry") return cmd_verify_symmetry(problem, r);
  if (command == "numcheck") return cmd_numcheck(problem, r);
  err << "unknown command '" << command << "'\n";
  return exit_code::usage;
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return exit_code::parse_error;
  if (dynamic_cast<const UnsupportedForm*>(&e)) return exit_code::unsupported;
  if (dynamic_cast<const VerificationFailure*>(&e)) return exit_code::verification;
  if (dynamic_cast<const NumericBlowUp*>(&e)) return exit_code::blow_up;
  return exit_code::usage;
}

}  // namespace jetvar
