#include "doctest.h"
#include "test_util.hpp"
#include "vsap/experiments.hpp"
#include "vsap/reference_solver.hpp"

#include <cmath>

using namespace vsap;

namespace {

ModelParams aggregation(double eps = 1.0) {
  ModelParams p;
  p.model = Model::Aggregation;
  p.eps = eps;
  p.influence.reset();
  return p;
}

ModelParams three_zone(double eps = 1.0, PotentialSpec pot = PotentialSpec::morse()) {
  ModelParams p;
  p.model = Model::ThreeZone;
  p.eps = eps;
  p.potential = pot;
  p.influence = InfluenceSpec{};
  return p;
}

PhaseField shifted_gaussian(const PhaseGrid& v, double shift, double sigma = 1.0) {
  PhaseField f(v.n_x, v.n_xi);
  for (int i = 0; i < v.n_x; ++i)
    for (int j = 0; j < v.n_xi; ++j) {
      const double z = (v.xi_centers[j] - shift) / sigma;
      f(i, j) = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
    }
  return f;
}

double variance(const PhaseGrid& v, const PhaseField& f) {
  const double rho = moment_0(v, f)[0];
  const double m = moment_1(v, f)[0];
  return moment_2_centered(v, f)[0] / rho - (m / rho) * (m / rho);
}

double min_image(double d) {
  while (d >= kPi) d -= 2.0 * kPi;
  while (d < -kPi) d += 2.0 * kPi;
  return d;
}

}  // namespace

TEST_CASE("collision speed: aggregation with uniform density is v") {
  const PhaseGrid v = build_grid(32, 64, 6.0);
  const ModelParams p = aggregation();
  const KernelTables t = build_tables(v, p);
  const CollisionCoefficients c = collision_coefficients(p, t, v.constant_x(1.0), v.zeros_x());
  for (double vel : {-3.0, 0.0, 0.7})
    for (int i = 0; i < v.n_x; ++i) CHECK(collision_flux_velocity(c, i, vel) == doctest::Approx(vel).epsilon(1e-13));
}

TEST_CASE("collision speed: three-zone with uniform density and no potential is A v") {
  const PhaseGrid v = build_grid(32, 64, 6.0);
  const ModelParams p = three_zone(1.0, PotentialSpec::none());
  const KernelTables t = build_tables(v, p);
  const CollisionCoefficients c = collision_coefficients(p, t, v.constant_x(0.5), v.zeros_x());
  const double a = c.A[0];
  CHECK(c.A.maxCoeff() - c.A.minCoeff() < 1e-14);
  for (int i = 0; i < v.n_x; ++i) CHECK(collision_flux_velocity(c, i, 1.3) == doctest::Approx(a * 1.3).epsilon(1e-14));
}

TEST_CASE("collision speed matches a brute-force double sum") {
  const PhaseGrid v = build_grid(12, 16, 6.0);
  const ModelParams p = three_zone();
  const KernelTables t = build_tables(v, p);
  const ScalarField rho = test::uniform(v.n_x, 0.1, 2.0);
  const ScalarField mom = test::uniform(v.n_x, -1.0, 1.0);
  const CollisionCoefficients c = collision_coefficients(p, t, rho, mom);
  for (int i = 0; i < v.n_x; ++i) {
    for (double vel : {-2.0, 0.3}) {
      double oracle = 0.0;
      for (int k = 0; k < v.n_x; ++k) {
        const double d = min_image(v.x_centers[i] - v.x_centers[k]);
        const double phi = 1.0 / std::sqrt(1.0 + d * d);
        const double kp = 2 * std::abs(i - k) == v.n_x
                              ? 0.0
                              : (d == 0.0 ? 0.0
                                          : (d > 0 ? 1.0 : -1.0) * (0.5 * std::exp(-std::abs(d) / 2) - std::exp(-std::abs(d))));
        oracle += (phi * (rho[k] * vel - mom[k]) + kp * rho[k]) * v.dx;
      }
      CHECK(collision_flux_velocity(c, i, vel) == doctest::Approx(oracle).epsilon(1e-13));
    }
  }
}

TEST_CASE("direct step: relaxation contracts the variance") {
  const PhaseGrid v = build_grid(8, 512, 6.0);
  const ModelParams p = aggregation(1.0);
  const KernelTables t = build_tables(v, p);
  PhaseField f = shifted_gaussian(v, 0.0);
  const double dt = 1e-3;
  double previous = variance(v, f);
  const double s0 = previous;
  for (auto scheme : {VelocityFlux::Upwind, VelocityFlux::Limited}) {
    PhaseField g = f;
    previous = s0;
    for (int n = 0; n < 20; ++n) {
      const PhaseField next = direct_step(v, g, p, t, dt, scheme);
      const double s = variance(v, next);
      CHECK(s < previous);
      const double rate = (s - previous) / dt;
      CHECK(rate == doctest::Approx(-2.0 * previous / p.eps).epsilon(0.05));
      previous = s;
      g = next;
    }
  }
}

TEST_CASE("direct step conserves mass") {
  const PhaseGrid v = build_grid(64, 128, 6.0);
  const ModelParams p = three_zone();
  const KernelTables t = build_tables(v, p);
  const PhaseField f = consistency_f0(v);
  for (auto scheme : {VelocityFlux::Upwind, VelocityFlux::Limited}) {
    const PhaseField next = direct_step(v, f, p, t, v.dx / 20.0, scheme);
    CHECK(std::abs(next.sum() - f.sum()) <= 1e-12 * f.sum());
  }
}

TEST_CASE("direct step: momentum of x-uniform aggregation data") {
  const PhaseGrid v = build_grid(16, 512, 6.0);
  const ModelParams p = aggregation(1.0);
  const KernelTables t = build_tables(v, p);
  const double dt = v.dx / 20.0;

  SUBCASE("even data keeps zero momentum") {
    const PhaseField f = shifted_gaussian(v, 0.0);
    for (auto scheme : {VelocityFlux::Upwind, VelocityFlux::Limited})
      CHECK(moment_1(v, direct_step(v, f, p, t, dt, scheme)).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("shifted data: forward Euler recursion up to the donor-cell bias") {
    const PhaseField f = shifted_gaussian(v, 0.5);
    const double m0 = moment_1(v, f)[0];
    const double rho = moment_0(v, f)[0];
    const ScalarField m1 = moment_1(v, direct_step(v, f, p, t, dt, VelocityFlux::Upwind));
    // Donor cell shifts each face value by half a cell: |bias| <= dt/eps * dv/2 * rho.
    CHECK(((m1 - m0 * (1.0 - dt / p.eps)).abs()).maxCoeff() <= dt / p.eps * 0.5 * v.dxi * rho);
  }
  SUBCASE("shifted data: limited scheme follows the Heun recursion") {
    const PhaseField f = shifted_gaussian(v, 0.5);
    const double m0 = moment_1(v, f)[0];
    const double h = dt / p.eps;
    const ScalarField m1 = moment_1(v, direct_step(v, f, p, t, dt, VelocityFlux::Limited));
    CHECK(((m1 - m0 * (1.0 - h + 0.5 * h * h)).abs()).maxCoeff() <= 1e-5 * m0 * h);
  }
}

TEST_CASE("reference dt rule") {
  const PhaseGrid v = build_grid(128, 512, 6.0);
  const ModelParams p = three_zone();
  const KernelTables t = build_tables(v, p);
  const PhaseField f = consistency_f0(v);
  const CollisionCoefficients c = collision_coefficients(p, t, moment_0(v, f), moment_1(v, f));
  const double dt = reference_dt(v, c, 1.0);
  CHECK(dt <= v.dx / 20.0);
  CHECK(dt <= 0.9 * v.dx / 6.0);
  double max_c = 0.0;
  for (int i = 0; i < v.n_x; ++i)
    max_c = std::max({max_c, std::abs(collision_flux_velocity(c, i, -6.0)), std::abs(collision_flux_velocity(c, i, 6.0))});
  CHECK(dt <= 0.9 * v.dxi / max_c * (1 + 1e-14));
  CHECK(reference_dt(v, c, 1e-3) < dt);
}

TEST_CASE("run_reference lands on snapshots and conserves mass") {
  const PhaseGrid v = build_grid(32, 128, 6.0);
  const ModelParams p = three_zone();
  const KernelTables t = build_tables(v, p);
  std::vector<double> seen;
  const ReferenceRunResult r =
      run_reference(v, consistency_f0(v), p, t, 0.1, {0.0, 0.05, 0.1}, [&](const ReferenceState& s) { seen.push_back(s.t); });
  CHECK(r.state.t == 0.1);
  REQUIRE(seen.size() == 3);
  CHECK(seen[1] == 0.05);
  for (double m : r.masses) CHECK(std::abs(m - r.masses.front()) <= 1e-12 * r.masses.front());
  CHECK_THROWS_AS(run_reference(v, consistency_f0(v), p, t, -1.0), std::invalid_argument);
}
