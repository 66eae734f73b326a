#pragma once

#include "jetvar/expression.hpp"
#include "jetvar/jet.hpp"

#include <functional>
#include <map>
#include <vector>

namespace jetvar {

// Periodic grid on [0, L) with N points. The time integrator treats the constant
// coefficient linear part of the right-hand side exactly (integrating factor on the
// symbol of the fourth-order central stencils) and the rest with classical RK4.
struct GridSpec {
  double length = 0.0;
  int points = 0;
  double dt = 0.0;
  double t_end = 0.0;
  int snapshots = 100;  // approximate number of stored states
  // A step is rejected as blow-up when a neighbour jump exceeds this fraction of the
  // initial data range.
  double jump_fraction = 0.5;

  double dx() const { return length / points; }
  void validate() const;  // throws Error
};

// Sampled u on the grid at the stored times.
struct Trajectory {
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

// Pointwise evaluator of an expression in x, t, u and u_x ... u_xxxx, using the fourth
// order central stencils for derivatives.
class CompiledField {
 public:
  // Binds constants; rejects function atoms, v, t-derivatives and orders above `max_order`.
  CompiledField(const Expression& e, const std::map<SymbolId, Rational>& constants,
                int max_order = 4);

  int order() const { return order_; }
  // Values at every grid point for state u at time t.
  std::vector<double> evaluate(const std::vector<double>& u, double dx, double t) const;

 private:
  struct Term {
    double coeff = 0.0;
    double u_exp = 0.0;
    int x_exp = 0;
    int t_exp = 0;
    std::vector<std::pair<int, int>> derivs;  // (x-order, power)
  };
  std::vector<Term> terms_;
  int order_ = 0;
};

// Derivative of order k (1..4) of periodic samples by the central fourth-order stencil.
std::vector<double> stencil_derivative(const std::vector<double>& u, int k, double dx);

// Throws NumericBlowUp with the last finite time on non-finite or unresolved states.
Trajectory integrate(const EvolutionEquation& eq, const GridSpec& grid,
                     const std::vector<double>& u0,
                     const std::map<SymbolId, Rational>& constants = {});

struct DensityTrace {
  std::vector<double> times;
  std::vector<double> integrals;  // periodic trapezoid rule
  double absolute_drift = 0.0;
  double relative_drift = 0.0;    // max |I(t)-I(0)| / max(|I(0)|, floor)
  double normalizer = 0.0;
};

// `floor` keeps the relative drift finite for zero-mean data; the normalizer is the
// larger of |I(0)|, the integral of |C0| at t=0 and `floor`.
DensityTrace density_drift(const Trajectory& traj, const Expression& c0,
                           const std::map<SymbolId, Rational>& constants = {},
                           double floor = 1e-30);

std::vector<double> sample(const std::function<double(double)>& profile, const GridSpec& grid);

}  // namespace jetvar
