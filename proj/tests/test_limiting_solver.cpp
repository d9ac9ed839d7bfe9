#include "doctest.h"
#include "test_util.hpp"
#include "vsap/errors.hpp"
#include "vsap/experiments.hpp"
#include "vsap/limiting_solver.hpp"

#include <cmath>

using namespace vsap;

namespace {

ModelParams aggregation(PotentialSpec pot = PotentialSpec::morse()) {
  ModelParams p;
  p.model = Model::Aggregation;
  p.potential = pot;
  p.influence.reset();
  return p;
}

ModelParams three_zone() {
  ModelParams p;
  p.model = Model::ThreeZone;
  p.influence = InfluenceSpec{};
  return p;
}

Eigen::MatrixXd dense_limit_matrix(const PhaseGrid& g, const KernelTables& t, const ScalarField& rho) {
  const int n = g.n_x;
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      mat(i, i) += t.phi(i, k) * rho[k] * g.dx;
      mat(i, k) -= t.phi(i, k) * rho[k] * g.dx;
    }
  }
  return mat;
}

}  // namespace

TEST_CASE("aggregation limit velocity: constants and symmetry") {
  const PhaseGrid g = build_grid(128, 4, 6.0);
  const KernelTables t = build_tables(g, aggregation());
  CHECK(limit_velocity_aggregation(t, g.constant_x(1.7)).abs().maxCoeff() < 1e-13);
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = 0.01 + std::exp(-20 * g.x_centers[i] * g.x_centers[i]);
  const ScalarField u = limit_velocity_aggregation(t, rho);
  for (int i = 0; i < g.n_x; ++i) CHECK(std::abs(u[i] + u[g.n_x - 1 - i]) < 1e-12);
  CHECK(std::abs((rho * u).sum() * g.dx) < 1e-14);
}

TEST_CASE("aggregation limit velocity of a point mass") {
  const PhaseGrid g = build_grid(33, 4, 6.0);
  const ModelParams p = aggregation();
  const KernelTables t = build_tables(g, p);
  const int k = 7;
  const double mass = 0.8;
  ScalarField rho = g.zeros_x();
  rho[k] = mass / g.dx;
  const ScalarField u = limit_velocity_aggregation(t, rho);
  for (int i = 0; i < g.n_x; ++i)
    CHECK(u[i] == doctest::Approx(-potential_grad(p.potential, wrap_periodic(g.x_centers[i] - g.x_centers[k])) * mass)
                      .epsilon(1e-12));
}

TEST_CASE("three-zone limit velocity of a constant density is zero") {
  const PhaseGrid g = build_grid(64, 4, 6.0);
  const KernelTables t = build_tables(g, three_zone());
  CHECK(limit_velocity_threezone(t, g.constant_x(1.0)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("three-zone limit velocity matches a dense constrained solve") {
  const PhaseGrid g = build_grid(16, 4, 6.0);
  const KernelTables t = build_tables(g, three_zone());
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField rho = test::uniform(g.n_x, 0.1, 2.0);
    const ScalarField rhs = -conv_gradK(t, rho);
    Eigen::MatrixXd bordered(g.n_x + 1, g.n_x);
    bordered.topRows(g.n_x) = dense_limit_matrix(g, t, rho);
    bordered.row(g.n_x) = (rho * g.dx).matrix().transpose();
    Eigen::VectorXd b(g.n_x + 1);
    b.head(g.n_x) = rhs.matrix();
    b[g.n_x] = 0.0;
    const Eigen::VectorXd dense = bordered.colPivHouseholderQr().solve(b);
    CgOptions cg;
    cg.rel_tol = 1e-12;
    int iterations = 0;
    const ScalarField u = limit_velocity_threezone(t, rho, cg, &iterations);
    CHECK(iterations > 0);
    CHECK(test::max_rel(u, dense.array()) < 1e-8);
    CHECK(std::abs((rho * u).sum() * g.dx) < 1e-12 * (rho * u.abs()).sum() * g.dx);
  }
}

TEST_CASE("three-zone limit velocity residual contract") {
  const PhaseGrid g = build_grid(128, 4, 6.0);
  const KernelTables t = build_tables(g, three_zone());
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = 0.01 + std::exp(-20 * g.x_centers[i] * g.x_centers[i]);
  const CgOptions cg;
  const ScalarField u = limit_velocity_threezone(t, rho, cg);
  const ScalarField conv = conv_gradK(t, rho);
  CHECK((limit_operator(t, rho, u) + conv).abs().maxCoeff() <= cg.rel_tol * conv.abs().maxCoeff() * (1 + 1e-6));
  CHECK(std::abs((rho * u).sum()) < 1e-12 * (rho * u.abs()).sum());
}

TEST_CASE("three-zone limit velocity: failure to converge") {
  const PhaseGrid g = build_grid(64, 4, 6.0);
  const KernelTables t = build_tables(g, three_zone());
  CgOptions cg;
  cg.rel_tol = 1e-15;
  cg.max_iter = 1;
  CHECK_THROWS_AS(limit_velocity_threezone(t, test::uniform(g.n_x, 0.1, 2.0), cg), SolverFailure);
}

TEST_CASE("limit operator is symmetric PSD in the rho inner product") {
  const PhaseGrid g = build_grid(20, 4, 6.0);
  const KernelTables t = build_tables(g, three_zone());
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField rho = test::uniform(g.n_x, 0.05, 2.0);
    const ScalarField u = test::uniform(g.n_x, -1.0, 1.0);
    const ScalarField w = test::uniform(g.n_x, -1.0, 1.0);
    auto dot = [&](const ScalarField& a, const ScalarField& b) { return (a * b * rho).sum() * g.dx; };
    const double lw = dot(limit_operator(t, rho, u), w);
    const double wl = dot(u, limit_operator(t, rho, w));
    CHECK(std::abs(lw - wl) <= 1e-10 * std::abs(lw));
    double quad = 0.0;
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j)
        quad += 0.5 * t.phi(i, j) * rho[i] * rho[j] * (u[i] - u[j]) * (u[i] - u[j]) * g.dx * g.dx;
    const double form = dot(limit_operator(t, rho, u), u);
    CHECK(form >= 0.0);
    CHECK(std::abs(form - quad) <= 1e-10 * quad);
    CHECK(limit_operator(t, rho, g.constant_x(0.3)).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("limit step: constant density, mass, CFL") {
  const PhaseGrid g = build_grid(128, 4, 6.0);
  for (const ModelParams& p : {aggregation(), three_zone()}) {
    const KernelTables t = build_tables(g, p);
    const ScalarField flat = g.constant_x(0.4);
    CHECK((limit_step(g, flat, t, p, g.dx / 20.0) - flat).abs().maxCoeff() < 1e-14);
    ScalarField rho(g.n_x);
    for (int i = 0; i < g.n_x; ++i) rho[i] = 0.01 + std::exp(-20 * g.x_centers[i] * g.x_centers[i]);
    const ScalarField next = limit_step(g, rho, t, p, g.dx / 20.0);
    CHECK(std::abs(next.sum() - rho.sum()) <= 1e-14 * rho.sum());
    CHECK_THROWS_AS(limit_step(g, rho, t, p, 10.0 * g.dx, {}, 0.9), StepRejected);
  }
}

TEST_CASE("continuity step uses the averaged face velocity") {
  const PhaseGrid g = build_grid(8, 4, 6.0);
  ScalarField rho = g.zeros_x();
  rho[3] = 1.0;
  const ScalarField u = g.constant_x(1.0);
  const double dt = 0.25 * g.dx;
  const ScalarField next = continuity_step(g, rho, u, dt);
  CHECK(next[3] == doctest::Approx(0.75));
  CHECK(next[4] == doctest::Approx(0.25));
}

TEST_CASE("stationary profile: flat input is already settled") {
  const PhaseGrid g = build_grid(64, 4, 6.0);
  const ModelParams p = aggregation();
  const KernelTables t = build_tables(g, p);
  const StationaryProfile s = stationary_profile(g, g.constant_x(1.0), t, p, g.dx / 20.0, 1.0);
  CHECK(s.converged);
  CHECK((s.rho - 1.0).abs().maxCoeff() <= 1e-8 * g.dx);
  CHECK(s.u.abs().maxCoeff() < 1e-12);
}

TEST_CASE("stationary profile: not settled when t_long is too small") {
  const PhaseGrid g = build_grid(64, 4, 6.0);
  ExperimentConfig c = build_preset(Preset::Ex4Application);
  const KernelTables t = build_tables(g, c.model);
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = initial_density(c.preset, g.x_centers[i]);
  const StationaryProfile s = stationary_profile(g, rho, t, c.model, g.dx / 20.0, 0.5);
  CHECK_FALSE(s.converged);
  CHECK(s.t == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s.residual > 1e-8);
}

TEST_CASE("stationary profile of a small aggregation problem") {
  // Coarse grid so that the profile settles quickly; the velocity is
  // small wherever the density is not negligible.
  const PhaseGrid g = build_grid(32, 4, 6.0);
  ExperimentConfig c = build_preset(Preset::Ex4Application);
  const KernelTables t = build_tables(g, c.model);
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = initial_density(c.preset, g.x_centers[i]);
  const double mass = integrate_x(g, rho);
  const StationaryProfile s = stationary_profile(g, rho, t, c.model, g.dx / 20.0, 20000.0, 1e-8);
  CHECK(s.converged);
  CHECK(std::abs(integrate_x(g, s.rho) - mass) <= 1e-12 * mass);
  CHECK((s.rho * s.u).abs().maxCoeff() <= 1e-3 * mass);
}

TEST_CASE("run_limit lands on t_final and conserves mass") {
  const PhaseGrid g = build_grid(128, 4, 6.0);
  const ModelParams p = three_zone();
  const KernelTables t = build_tables(g, p);
  ScalarField rho(g.n_x);
  for (int i = 0; i < g.n_x; ++i) rho[i] = initial_density(Preset::Ex3AP, g.x_centers[i]);
  std::vector<double> seen;
  const LimitState s = run_limit(g, rho, t, p, g.dx / 20.0, 0.3, {}, {0.0, 0.1, 0.3},
                                 [&](const LimitState& st) { seen.push_back(st.t); });
  CHECK(s.t == 0.3);
  REQUIRE(seen.size() == 3);
  CHECK(seen[1] == 0.1);
  CHECK(std::abs(s.rho.sum() - rho.sum()) <= 1e-13 * rho.sum());
}
