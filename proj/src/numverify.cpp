#include "jetvar/numverify.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/format.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

namespace jetvar {

namespace {

// Central fourth-order weights for offsets -3..3, divided by dx^k.
constexpr double kStencil[5][7] = {
    {0, 0, 0, 1, 0, 0, 0},
    {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0},
    {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0},
    {1.0 / 8, -1.0, 13.0 / 8, 0, -13.0 / 8, 1.0, -1.0 / 8},
    {-1.0 / 6, 2.0, -39.0 / 6, 56.0 / 6, -39.0 / 6, 2.0, -1.0 / 6},
};

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double to_double(const Rational& r) { return r.get_d(); }

Rational constant_value(SymbolId s, const std::map<SymbolId, Rational>& constants) {
  auto it = constants.find(s);
  if (it == constants.end())
    throw Error("constant " + symbol_name(s) + " has no numeric value; bind it with `set " +
                symbol_name(s) + " = ...`");
  return it->second;
}

class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }

  using Spectrum = std::vector<std::complex<double>>;

  Spectrum forward(const std::vector<double>& u) {
    std::copy(u.begin(), u.end(), real_);
    fftw_execute(forward_);
    Spectrum out(n_ / 2 + 1);
    for (int i = 0; i <= n_ / 2; ++i) out[i] = {spec_[i][0], spec_[i][1]};
    return out;
  }

  std::vector<double> backward(const Spectrum& s) {
    for (int i = 0; i <= n_ / 2; ++i) {
      spec_[i][0] = s[i].real();
      spec_[i][1] = s[i].imag();
    }
    fftw_execute(backward_);
    std::vector<double> out(real_, real_ + n_);
    for (double& v : out) v /= n_;
    return out;
  }

 private:
  int n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_;
  fftw_plan backward_;
};

// Symbol of the k-th stencil at wavenumber index m.
std::complex<double> stencil_symbol(int k, int m, int n, double dx) {
  const double theta = 2.0 * std::numbers::pi * m / n;
  std::complex<double> s = 0.0;
  for (int o = -3; o <= 3; ++o) s += kStencil[k][o + 3] * std::polar(1.0, o * theta);
  return s / std::pow(dx, k);
}

struct Split {
  std::vector<std::pair<int, double>> linear;  // (x-order, coefficient)
  Expression rest;
};

Split split_linear(const Expression& rhs, const std::map<SymbolId, Rational>& constants) {
  Split s;
  auto value = [&](SymbolId id) { return constant_value(id, constants); };
  for (const auto& [m, c] : rhs.terms()) {
    bool plain_u = m.factors.empty() && m.u_exp == Affine(1);
    bool single_jet = m.u_exp.is_zero() && m.factors.size() == 1 &&
                      m.factors[0].second == 1 && m.factors[0].first.is_jet() &&
                      m.factors[0].first.symbol == sym::u && m.factors[0].first.t == 0;
    if (plain_u || single_jet) {
      int k = plain_u ? 0 : m.factors[0].first.x;
      s.linear.emplace_back(k, to_double(c.evaluate(value)));
    } else {
      s.rest += Expression::term(m, c);
    }
  }
  return s;
}

void check_state(const std::vector<double>& u, double range0, const GridSpec& grid, double t,
                 double last_good) {
  for (double v : u)
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite value at t = " << t;
      throw NumericBlowUp(msg.str(), last_good);
    }
  if (range0 <= 0.0) return;
  double jump = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    jump = std::max(jump, std::abs(u[(i + 1) % u.size()] - u[i]));
  if (jump > grid.jump_fraction * range0) {
    std::ostringstream msg;
    msg << "gradient no longer resolved at t = " << t << " (neighbour jump " << jump << ")";
    throw NumericBlowUp(msg.str(), last_good);
  }
}

}  // namespace

void GridSpec::validate() const {
  if (points < 32) throw Error("grid needs at least 32 points");
  if (!(length > 0.0)) throw Error("domain length must be positive");
  if (!(dt > 0.0)) throw Error("time step must be positive");
  if (!(t_end >= 0.0)) throw Error("final time must be non-negative");
  if (snapshots < 1) throw Error("at least one snapshot is required");
}

std::vector<double> stencil_derivative(const std::vector<double>& u, int k, double dx) {
  if (k < 0 || k > 4) throw Error("stencil order must be in 0..4");
  const int n = static_cast<int>(u.size());
  std::vector<double> out(n, 0.0);
  const double scale = std::pow(dx, k);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int o = -3; o <= 3; ++o) {
      double w = kStencil[k][o + 3];
      if (w != 0.0) acc += w * u[((i + o) % n + n) % n];
    }
    out[i] = acc / scale;
  }
  return out;
}

CompiledField::CompiledField(const Expression& e, const std::map<SymbolId, Rational>& constants,
                             int max_order) {
  auto value = [&](SymbolId id) { return constant_value(id, constants); };
  for (const auto& [m, c] : e.terms()) {
    Term term;
    term.coeff = to_double(c.evaluate(value));
    Rational exp(static_cast<long>(m.u_exp.constant));
    for (const auto& [s, k] : m.u_exp.coeffs) exp += Rational(static_cast<long>(k)) * value(s);
    term.u_exp = to_double(exp);
    for (const auto& [a, p] : m.factors) {
      if (a == kAtomX) {
        term.x_exp = p;
      } else if (a == kAtomT) {
        term.t_exp = p;
      } else if (a.is_jet() && a.symbol == sym::u && a.t == 0) {
        if (a.x > max_order)
          throw UnsupportedForm("numeric evaluation supports derivatives up to order " +
                                std::to_string(max_order) + ", got " + atom_name(a));
        term.derivs.emplace_back(a.x, p);
        order_ = std::max<int>(order_, a.x);
      } else if (a.is_jet() && a.symbol == sym::u) {
        throw UnsupportedForm("t-derivative " + atom_name(a) + " in a numeric field; reduce first");
      } else {
        throw UnsupportedForm("atom " + atom_name(a) + " cannot be evaluated numerically");
      }
    }
    terms_.push_back(std::move(term));
  }
}

std::vector<double> CompiledField::evaluate(const std::vector<double>& u, double dx,
                                            double t) const {
  const std::size_t n = u.size();
  std::vector<std::vector<double>> derivs(order_ + 1);
  for (const Term& term : terms_)
    for (const auto& [k, p] : term.derivs)
      if (derivs[k].empty()) derivs[k] = stencil_derivative(u, k, dx);
  std::vector<double> out(n, 0.0);
  for (const Term& term : terms_) {
    const double tfac = term.coeff * std::pow(t, term.t_exp);
    for (std::size_t i = 0; i < n; ++i) {
      double v = tfac;
      if (term.u_exp != 0.0) v *= std::pow(u[i], term.u_exp);
      if (term.x_exp != 0) v *= std::pow(dx * static_cast<double>(i), term.x_exp);
      for (const auto& [k, p] : term.derivs) v *= std::pow(derivs[k][i], p);
      out[i] += v;
    }
  }
  return out;
}

std::vector<double> sample(const std::function<double(double)>& profile, const GridSpec& grid) {
  std::vector<double> u(grid.points);
  for (int i = 0; i < grid.points; ++i) u[i] = profile(grid.dx() * i);
  return u;
}

Trajectory integrate(const EvolutionEquation& eq, const GridSpec& grid,
                     const std::vector<double>& u0, const std::map<SymbolId, Rational>& constants) {
  grid.validate();
  if (static_cast<int>(u0.size()) != grid.points)
    throw Error("initial data has " + std::to_string(u0.size()) + " samples, grid has " +
                std::to_string(grid.points));
  if (!eq.unknown_functions().empty() || eq.rhs().contains_kind(AtomKind::function))
    throw UnsupportedForm("numeric integration needs every coefficient function bound");

  const int n = grid.points;
  const double dx = grid.dx();
  Split split = split_linear(eq.rhs(), constants);
  CompiledField nonlinear(split.rest, constants);

  const long steps = std::max(1L, static_cast<long>(std::ceil(grid.t_end / grid.dt - 1e-9)));
  const double h = grid.t_end > 0.0 ? grid.t_end / steps : 0.0;
  const long stride = std::max(1L, steps / grid.snapshots);

  std::vector<std::complex<double>> e_full(n / 2 + 1), e_half(n / 2 + 1);
  for (int m = 0; m <= n / 2; ++m) {
    std::complex<double> lambda = 0.0;
    for (const auto& [k, c] : split.linear) lambda += c * stencil_symbol(k, m, n, dx);
    e_full[m] = std::exp(lambda * h);
    e_half[m] = std::exp(lambda * (h / 2));
  }

  RealFft fft(n);
  auto rhs_hat = [&](const RealFft::Spectrum& s, double t) {
    return fft.forward(nonlinear.evaluate(fft.backward(s), dx, t));
  };
  auto combine = [](const RealFft::Spectrum& a, const std::vector<std::complex<double>>& e,
                    const RealFft::Spectrum& b, double w) {
    RealFft::Spectrum out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = e[i] * a[i] + w * b[i];
    return out;
  };

  double lo = *std::min_element(u0.begin(), u0.end());
  double hi = *std::max_element(u0.begin(), u0.end());
  const double range0 = hi - lo;

  Trajectory traj;
  traj.grid = grid;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  check_state(u0, range0, grid, 0.0, 0.0);
  if (grid.t_end == 0.0) return traj;

  RealFft::Spectrum s = fft.forward(u0);
  double t = 0.0;
  for (long step = 1; step <= steps; ++step) {
    // Lawson RK4 in the variable exp(-L t) u.
    auto a = rhs_hat(s, t);
    RealFft::Spectrum s1(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) s1[i] = e_half[i] * (s[i] + (h / 2) * a[i]);
    auto b = rhs_hat(s1, t + h / 2);
    auto s2 = combine(s, e_half, b, h / 2);
    auto c = rhs_hat(s2, t + h / 2);
    RealFft::Spectrum s3(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) s3[i] = e_full[i] * s[i] + h * e_half[i] * c[i];
    auto d = rhs_hat(s3, t + h);
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = e_full[i] * s[i] +
             h / 6 * (e_full[i] * a[i] + 2.0 * e_half[i] * (b[i] + c[i]) + d[i]);

    const double last_good = t;
    t = step * h;
    std::vector<double> u = fft.backward(s);
    check_state(u, range0, grid, t, last_good);
    if (step % stride == 0 || step == steps) {
      traj.times.push_back(t);
      traj.states.push_back(std::move(u));
    }
  }
  return traj;
}

DensityTrace density_drift(const Trajectory& traj, const Expression& c0,
                           const std::map<SymbolId, Rational>& constants, double floor) {
  for (const Atom& a : c0.atoms())
    if (a.is_jet() && a.t > 0)
      throw UnsupportedForm("density " + to_plain(c0) + " contains a t-derivative; reduce first");
  CompiledField field(c0, constants, 2);
  const double dx = traj.grid.dx();
  DensityTrace trace;
  double abs0 = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    std::vector<double> values = field.evaluate(traj.states[i], dx, traj.times[i]);
    double sum = 0.0;
    for (double v : values) sum += v;
    if (i == 0)
      for (double v : values) abs0 += std::abs(v) * dx;
    trace.times.push_back(traj.times[i]);
    trace.integrals.push_back(sum * dx);
  }
  const double i0 = trace.integrals.empty() ? 0.0 : trace.integrals.front();
  for (double v : trace.integrals) trace.absolute_drift = std::max(trace.absolute_drift, std::abs(v - i0));
  trace.normalizer = std::max({std::abs(i0), abs0, floor});
  trace.relative_drift = trace.absolute_drift / trace.normalizer;
  return trace;
}

}  // namespace jetvar
