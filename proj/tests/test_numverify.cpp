#include "support.hpp"

#include "jetvar/errors.hpp"
#include "jetvar/numverify.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace testing;

namespace {

GridSpec kdv_grid(int n, double t_end) {
  GridSpec g;
  g.length = 2 * std::numbers::pi;
  g.points = n;
  g.dt = 1e-4;
  g.t_end = t_end;
  return g;
}

std::vector<double> cosine(const GridSpec& g) {
  return sample([](double x) { return std::cos(x); }, g);
}

const EvolutionEquation& kdv() {
  static const EvolutionEquation eq(P("u_xxx + u*u_x"));
  return eq;
}

}  // namespace

TEST_SUITE("numverify") {

TEST_CASE("stencils are fourth-order accurate on a smooth periodic function") {
  double err[2];
  for (int pass = 0; pass < 2; ++pass) {
    GridSpec g = kdv_grid(pass == 0 ? 64 : 128, 0);
    std::vector<double> u = sample([](double x) { return std::sin(2 * x); }, g);
    double worst = 0;
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> d = stencil_derivative(u, k, g.dx());
      for (int i = 0; i < g.points; ++i) {
        double x = i * g.dx();
        double exact = std::pow(2.0, k) * std::sin(2 * x + k * std::numbers::pi / 2);
        worst = std::max(worst, std::abs(d[i] - exact));
      }
    }
    err[pass] = worst;
  }
  CHECK(err[0] / err[1] > 12);
  CHECK(err[0] / err[1] < 20);
}

TEST_CASE("compiled fields evaluate expressions pointwise") {
  GridSpec g = kdv_grid(64, 0);
  std::vector<double> u = sample([](double x) { return 2 + std::sin(x); }, g);
  CompiledField f(P("x*u^2 + t*u_x - u^mu"), {{intern("mu"), Rational(3)}});
  CHECK(f.order() == 1);
  std::vector<double> v = f.evaluate(u, g.dx(), 0.5);
  for (int i = 0; i < g.points; i += 7) {
    double x = i * g.dx(), ui = 2 + std::sin(x);
    CHECK(v[i] == doctest::Approx(x * ui * ui + 0.5 * std::cos(x) - ui * ui * ui).epsilon(1e-5));
  }
}

TEST_CASE("compiled fields reject what they cannot evaluate") {
  CHECK_THROWS_AS(CompiledField(P("r(u)*u_x"), {}), UnsupportedForm);
  CHECK_THROWS_AS(CompiledField(P("u_t"), {}), UnsupportedForm);
  CHECK_THROWS_AS(CompiledField(P("u_xxxx"), {}, 3), UnsupportedForm);
  CHECK_THROWS_AS(CompiledField(P("u^mu"), {}), Error);
}

TEST_CASE("grid validation") {
  GridSpec g = kdv_grid(16, 1);
  CHECK_THROWS_AS(g.validate(), Error);
  g = kdv_grid(64, 1);
  g.dt = 0;
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK_NOTHROW(kdv_grid(32, 0).validate());
}

TEST_CASE("KdV run stays finite and conserves mass and energy") {
  GridSpec g = kdv_grid(128, 0.5);
  Trajectory tr = integrate(kdv(), g, cosine(g));
  CHECK(tr.times.back() == doctest::Approx(0.5));
  for (double v : tr.states.back()) CHECK(std::isfinite(v));
  CHECK(density_drift(tr, P("u")).relative_drift < 1e-10);
  CHECK(density_drift(tr, P("u^2")).relative_drift < 1e-5);
}

TEST_CASE("zero data stays zero") {
  GridSpec g = kdv_grid(64, 0.1);
  Trajectory tr = integrate(kdv(), g, std::vector<double>(64, 0.0));
  for (double v : tr.states.back()) CHECK(v == 0.0);
  DensityTrace d = density_drift(tr, P("u^2"));
  CHECK(d.absolute_drift == 0.0);
  CHECK(d.relative_drift == 0.0);
}

TEST_CASE("Burgers steepens and blows up after t = 1") {
  GridSpec g = kdv_grid(256, 2);
  g.dt = 1e-3;
  try {
    integrate(EvolutionEquation(P("u*u_x")), g, cosine(g));
    FAIL("expected NumericBlowUp");
  } catch (const NumericBlowUp& e) {
    CHECK(e.last_valid_time() > 0.9);
    CHECK(e.last_valid_time() < 1.3);
  }
}

TEST_CASE("non-conserved control density drifts much more") {
  GridSpec g = kdv_grid(128, 0.5);
  Trajectory tr = integrate(kdv(), g, cosine(g));
  double energy = density_drift(tr, P("u^2")).relative_drift;
  double control = density_drift(tr, P("u_x^2")).relative_drift;
  CHECK(control > 1e3 * energy);
}

TEST_CASE("energy drift shrinks at fourth order under refinement") {
  double drift[2];
  for (int pass = 0; pass < 2; ++pass) {
    GridSpec g = kdv_grid(pass == 0 ? 64 : 128, 0.5);
    drift[pass] = density_drift(integrate(kdv(), g, cosine(g)), P("u^2")).relative_drift;
  }
  CHECK(drift[0] / drift[1] > 8);
}

TEST_CASE("densities with t-derivatives are rejected") {
  GridSpec g = kdv_grid(32, 0.01);
  Trajectory tr = integrate(kdv(), g, cosine(g));
  CHECK_THROWS_AS(density_drift(tr, P("u*u_t")), UnsupportedForm);
}

TEST_CASE("numeric integration needs bound constants and concrete functions") {
  GridSpec g = kdv_grid(32, 0.01);
  CHECK_THROWS_AS(integrate(EvolutionEquation(P("u_xxx + u^mu*u_x")), g, cosine(g)), Error);
  CHECK_NOTHROW(integrate(EvolutionEquation(P("u_xxx + u^mu*u_x")), g, cosine(g),
                          {{intern("mu"), Rational(2)}}));
  CHECK_THROWS_AS(integrate(EvolutionEquation(P("r(u)*u_xxx")), g, cosine(g)), UnsupportedForm);
}

}
