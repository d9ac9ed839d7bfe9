#include "vsap/reference_solver.hpp"

#include "vsap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vsap {

CollisionCoefficients collision_coefficients(const ModelParams& params, const KernelTables& tables,
                                             const ScalarField& rho, const ScalarField& momentum) {
  CollisionCoefficients c;
  c.attraction = conv_gradK(tables, rho);
  if (params.model == Model::Aggregation) {
    c.A = ScalarField::Ones(rho.size());
    c.J = ScalarField::Zero(rho.size());
  } else {
    c.A = conv_phi(tables, rho);
    c.J = conv_phi(tables, momentum);
  }
  return c;
}

double collision_flux_velocity(const CollisionCoefficients& coeffs, int i, double v) {
  return coeffs.A[i] * v - coeffs.J[i] + coeffs.attraction[i];
}

double reference_dt(const PhaseGrid& grid, const CollisionCoefficients& coeffs, double eps) {
  double max_c = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    max_c = std::max({max_c, std::abs(collision_flux_velocity(coeffs, i, grid.xi_lo)),
                      std::abs(collision_flux_velocity(coeffs, i, grid.xi_hi))});
  }
  double dt = grid.dx / 20.0;
  if (max_c > 0.0) dt = std::min(dt, 0.9 * grid.dxi * eps / max_c);
  return std::min(dt, 0.9 * grid.dx / grid.xi_max());
}

namespace {

// Van Leer limited slope of the three cell values a, b, c (centered on b).
double limited_slope(double a, double b, double c) {
  const double l = b - a;
  const double r = c - b;
  if (l * r <= 0.0) return 0.0;
  return 2.0 * l * r / (l + r);
}

PhaseField direct_rhs(const PhaseGrid& grid, const PhaseField& f, const ModelParams& params,
                      const KernelTables& tables, VelocityFlux scheme) {
  const int nx = grid.n_x;
  const int nv = grid.n_xi;
  const ScalarField rho = moment_0(grid, f);
  const ScalarField momentum = moment_1(grid, f);
  const CollisionCoefficients coeffs = collision_coefficients(params, tables, rho, momentum);

  PhaseField flux_x(nx, nv);
  for (int i = 0; i < nx; ++i) {
    const int ip = grid.wrap(i + 1);
    for (int j = 0; j < nv; ++j) flux_x(i, j) = upwind_flux(grid.xi_centers[j], f(i, j), f(ip, j));
  }
  const double inv_eps = 1.0 / params.eps;
  PhaseField flux_v = PhaseField::Zero(nx, nv + 1);
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < nv; ++j) {
      const double speed = -inv_eps * collision_flux_velocity(coeffs, i, grid.xi_face(j));
      double left = f(i, j - 1);
      double right = f(i, j);
      if (scheme == VelocityFlux::Limited) {
        // Zero ghost values past the truncated velocity domain.
        const double far_left = j >= 2 ? f(i, j - 2) : 0.0;
        const double far_right = j + 1 < nv ? f(i, j + 1) : 0.0;
        left += 0.5 * limited_slope(far_left, left, f(i, j));
        right -= 0.5 * limited_slope(f(i, j - 1), right, far_right);
      }
      flux_v(i, j) = upwind_flux(speed, left, right);
    }
  }

  PhaseField out(nx, nv);
  for (int i = 0; i < nx; ++i) {
    const int im = grid.wrap(i - 1);
    for (int j = 0; j < nv; ++j) {
      out(i, j) = -(flux_x(i, j) - flux_x(im, j)) / grid.dx - (flux_v(i, j + 1) - flux_v(i, j)) / grid.dxi;
    }
  }
  return out;
}

}  // namespace

PhaseField direct_step(const PhaseGrid& grid, const PhaseField& f, const ModelParams& params,
                       const KernelTables& tables, double dt, VelocityFlux scheme) {
  if (scheme == VelocityFlux::Upwind) return f + dt * direct_rhs(grid, f, params, tables, scheme);
  // Heun's method keeps the limited scheme stable under the same step rule.
  const PhaseField stage = f + dt * direct_rhs(grid, f, params, tables, scheme);
  return 0.5 * (f + stage + dt * direct_rhs(grid, stage, params, tables, scheme));
}

ReferenceRunResult run_reference(const PhaseGrid& grid, const PhaseField& f0, const ModelParams& params,
                                 const KernelTables& tables, double t_final,
                                 const std::vector<double>& snapshot_times,
                                 const std::function<void(const ReferenceState&)>& on_snapshot,
                                 VelocityFlux scheme) {
  if (t_final < 0.0) throw std::invalid_argument("run_reference: negative final time");
  ReferenceRunResult result;
  ReferenceState& state = result.state;
  state.f = f0;

  std::vector<double> targets;
  for (double t : snapshot_times)
    if (t >= 0.0 && t <= t_final) targets.push_back(t);
  std::sort(targets.begin(), targets.end());
  auto target = targets.begin();
  auto emit_due = [&] {
    while (target != targets.end() && *target <= state.t) {
      if (on_snapshot) on_snapshot(state);
      ++target;
    }
  };
  auto record = [&] {
    result.times.push_back(state.t);
    result.masses.push_back(integrate_x(grid, moment_0(grid, state.f)));
  };
  record();
  emit_due();

  while (state.t < t_final) {
    const double goal = target != targets.end() ? *target : t_final;
    const ScalarField rho = moment_0(grid, state.f);
    const CollisionCoefficients coeffs =
        collision_coefficients(params, tables, rho, moment_1(grid, state.f));
    double dt = reference_dt(grid, coeffs, params.eps);
    bool landing = false;
    if (state.t + dt >= goal - 1e-12 * std::max(1.0, std::abs(goal))) {
      dt = goal - state.t;
      landing = true;
    }
    state.f = direct_step(grid, state.f, params, tables, dt, scheme);
    state.t = landing ? goal : state.t + dt;
    ++state.n;
    if (!state.f.allFinite()) throw SimulationDiverged("reference solver", state.n);
    record();
    emit_due();
  }
  return result;
}

}  // namespace vsap
