#include "doctest.h"
#include "test_util.hpp"
#include "vsap/errors.hpp"
#include "vsap/experiments.hpp"
#include "vsap/transform.hpp"

#include <cmath>
#include <stdexcept>

using namespace vsap;

namespace {

PhaseField ex2_f0(const PhaseGrid& g) { return consistency_f0(g); }

double l1(const PhaseGrid& g, const PhaseField& a) { return a.abs().sum() * g.dx * g.dxi; }

}  // namespace

TEST_CASE("interpolation: nodes, midpoints and the zero extension") {
  const PhaseGrid g = build_grid(2, 8, 4.0);
  PhaseField f(2, 8);
  for (int j = 0; j < 8; ++j) f(0, j) = f(1, j) = j + 1.0;
  CHECK(interpolate_velocity(g, f, 0, g.xi_centers[3]) == 4.0);
  CHECK(interpolate_velocity(g, f, 0, 0.5 * (g.xi_centers[3] + g.xi_centers[4])) == doctest::Approx(4.5));
  CHECK(interpolate_velocity(g, f, 0, 4.5) == 0.0);
  CHECK(interpolate_velocity(g, f, 0, -4.0) == 0.0);
  // Between the last center and the domain edge, blend toward zero.
  CHECK(interpolate_velocity(g, f, 0, g.xi_centers[7] + 0.25 * g.dxi) == doctest::Approx(0.75 * 8.0));
}

TEST_CASE("identity transform") {
  const PhaseGrid g = build_grid(16, 64, 6.0);
  PhaseField f = test::uniform(16 * 64, 0.0, 1.0).reshaped(16, 64);
  const ScalarField u = g.zeros_x();
  const ScalarField w = g.constant_x(1.0);
  CHECK((transform_forward(g, f, u, w, g) - f).abs().maxCoeff() == 0.0);
  CHECK((transform_inverse(g, f, u, w, g) - f).abs().maxCoeff() == 0.0);
}

TEST_CASE("constant shift of a Gaussian") {
  const PhaseGrid g = build_grid(16, 64, 6.0);
  const PhaseField f = test::maxwellian_field(g, g.constant_x(1.0));
  const double u0 = 0.37;
  const PhaseField shifted = transform_forward(g, f, g.constant_x(u0), g.constant_x(1.0), g);
  double worst = 0.0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_xi; ++j)
      worst = std::max(worst, std::abs(shifted(i, j) - test::gaussian(g.xi_centers[j] + u0)));
  CHECK(worst < 1e-3);
  const double rel_mass = std::abs(l1(g, shifted) - l1(g, f)) / l1(g, f);
  CHECK(rel_mass < 1e-3);
}

TEST_CASE("density is preserved by the forward transform") {
  const PhaseGrid v = build_grid(128, 512, 6.0);
  const PhaseGrid xi = build_grid(128, 64, 6.0);
  const PhaseField f = ex2_f0(v);
  ScalarField u(v.n_x), w(v.n_x);
  for (int i = 0; i < v.n_x; ++i) {
    u[i] = 0.2 * std::sin(v.x_centers[i]);
    w[i] = 0.8 + 0.1 * std::cos(v.x_centers[i]);
  }
  const PhaseField g = transform_forward(v, f, u, w, xi);
  CHECK((moment_0(xi, g) - moment_0(v, f)).abs().maxCoeff() < 1e-3);
}

TEST_CASE("round trip and mass of the inverse transform") {
  const PhaseGrid v = build_grid(128, 64, 6.0);
  PhaseField f(v.n_x, v.n_xi);
  for (int i = 0; i < v.n_x; ++i)
    for (int j = 0; j < v.n_xi; ++j)
      f(i, j) = (1.0 + 0.5 * std::cos(v.x_centers[i])) * test::gaussian(v.xi_centers[j] - 0.3);
  ScalarField u(v.n_x), w(v.n_x);
  for (int i = 0; i < v.n_x; ++i) {
    u[i] = 0.3 + 0.1 * std::sin(v.x_centers[i]);
    w[i] = 0.9 + 0.05 * std::sin(2 * v.x_centers[i]);
  }
  const PhaseField g = transform_forward(v, f, u, w, v);
  const PhaseField back = transform_inverse(v, g, u, w, v);
  CHECK(l1(v, PhaseField(back - f)) / l1(v, f) < 1e-2);
  CHECK(std::abs(l1(v, g) - l1(v, f)) / l1(v, f) < 1e-3);
  CHECK(std::abs(l1(v, back) - l1(v, g)) / l1(v, g) < 1e-3);
}

TEST_CASE("round trip error decreases under refinement") {
  double previous = 1.0;
  for (int n : {32, 64, 128}) {
    const PhaseGrid v = build_grid(8, n, 6.0);
    PhaseField f(v.n_x, v.n_xi);
    for (int i = 0; i < v.n_x; ++i)
      for (int j = 0; j < v.n_xi; ++j) f(i, j) = test::gaussian(v.xi_centers[j]);
    const ScalarField u = v.constant_x(0.21);
    const ScalarField w = v.constant_x(0.7);
    const PhaseField back = transform_inverse(v, transform_forward(v, f, u, w, v), u, w, v);
    const double err = l1(v, PhaseField(back - f));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("non-positive omega is an invalid state") {
  const PhaseGrid g = build_grid(8, 8, 6.0);
  const PhaseField f = g.zeros();
  ScalarField w = g.constant_x(1.0);
  w[3] = 0.0;
  CHECK_THROWS_AS(transform_forward(g, f, g.zeros_x(), w, g), InvalidState);
  w[3] = -1.0;
  CHECK_THROWS_AS(transform_inverse(g, f, g.zeros_x(), w, g), InvalidState);
}

TEST_CASE("initialize_triple on a Maxwellian product") {
  const PhaseGrid g = build_grid(32, 64, 6.0);
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = 1.0 + 0.5 * std::sin(g.x_centers[i]);
  const PhaseField f0 = test::maxwellian_field(g, rho);
  const InitialTriple t = initialize_triple(g, f0);
  CHECK(t.u.abs().maxCoeff() == 0.0);
  CHECK((t.omega - 1.0).abs().maxCoeff() == 0.0);
  CHECK((t.g - f0).abs().maxCoeff() < 1e-14);
  CHECK((t.rho - moment_0(g, f0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("initialize_triple on the Ex2 mixture") {
  const PhaseGrid g = build_grid(128, 64, 6.0);
  const InitialTriple t = initialize_triple(g, ex2_f0(g));
  CHECK(t.u.abs().maxCoeff() < 1e-12);
  CHECK(moment_1(g, t.g).abs().maxCoeff() < 1e-10);
}

TEST_CASE("initialize_triple centers shifted data") {
  const PhaseGrid g = build_grid(16, 128, 6.0);
  PhaseField f0(g.n_x, g.n_xi);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_xi; ++j) f0(i, j) = test::gaussian(g.xi_centers[j] - 0.4);
  const InitialTriple t = initialize_triple(g, f0);
  CHECK((t.u - 0.4).abs().maxCoeff() < 1e-6);  // tail truncation at xi = 6
  CHECK(moment_1(g, t.g).abs().maxCoeff() < 1e-3);
}

TEST_CASE("initialize_triple rejects negative data") {
  const PhaseGrid g = build_grid(8, 8, 6.0);
  PhaseField f0 = PhaseField::Constant(8, 8, 0.1);
  f0(2, 5) = -1e-3;
  CHECK_THROWS_AS(initialize_triple(g, f0), InvalidInput);
}
