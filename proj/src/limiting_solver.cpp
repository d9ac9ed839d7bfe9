#include "vsap/limiting_solver.hpp"

#include "vsap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vsap {

ScalarField limit_velocity_aggregation(const KernelTables& tables, const ScalarField& rho) {
  return -conv_gradK(tables, rho);
}

ScalarField limit_operator(const KernelTables& tables, const ScalarField& rho, const ScalarField& u) {
  const ScalarField rho_u = rho * u;
  return conv_phi(tables, rho) * u - conv_phi(tables, rho_u);
}

ScalarField limit_velocity_threezone(const KernelTables& tables, const ScalarField& rho, const CgOptions& cg,
                                     int* iterations) {
  const ScalarField weight = floored(rho);
  const double total = weight.sum();
  auto project = [&](ScalarField v) -> ScalarField { return v - (weight * v).sum() / total; };
  auto apply = [&](const ScalarField& u) -> ScalarField { return limit_operator(tables, weight, u); };

  const ScalarField rhs = project(-conv_gradK(tables, rho));
  ScalarField u = ScalarField::Zero(rho.size());
  const CgReport report = weighted_cg<double>(apply, project, rhs, weight, u, cg, CgStop::Max);
  if (!report.converged) {
    throw SolverFailure("limiting velocity solve did not converge", report.iterations, report.rel_residual);
  }
  if (iterations) *iterations = report.iterations;
  return project(u);
}

ScalarField limit_velocity(const ModelParams& params, const KernelTables& tables, const ScalarField& rho,
                           const CgOptions& cg) {
  if (params.model == Model::Aggregation) return limit_velocity_aggregation(tables, rho);
  return limit_velocity_threezone(tables, rho, cg);
}

ScalarField continuity_step(const PhaseGrid& grid, const ScalarField& rho, const ScalarField& u, double dt) {
  const int nx = grid.n_x;
  ScalarField flux(nx);
  for (int i = 0; i < nx; ++i) {
    const int ip = grid.wrap(i + 1);
    flux[i] = upwind_flux(0.5 * (u[i] + u[ip]), rho[i], rho[ip]);
  }
  ScalarField out(nx);
  const double lambda = dt / grid.dx;
  for (int i = 0; i < nx; ++i) out[i] = rho[i] - lambda * (flux[i] - flux[grid.wrap(i - 1)]);
  return out;
}

ScalarField limit_step(const PhaseGrid& grid, const ScalarField& rho, const KernelTables& tables,
                       const ModelParams& params, double dt, const CgOptions& cg, std::optional<double> safe_cfl) {
  const ScalarField u = limit_velocity(params, tables, rho, cg);
  if (safe_cfl) {
    const double max_u = u.abs().maxCoeff();
    if (max_u > 0.0 && dt * max_u / grid.dx > *safe_cfl) throw StepRejected(dt, *safe_cfl * grid.dx / max_u);
  }
  return continuity_step(grid, rho, u, dt);
}

StationaryProfile stationary_profile(const PhaseGrid& grid, const ScalarField& rho0, const KernelTables& tables,
                                     const ModelParams& params, double dt, double t_long, double settle_tol,
                                     const CgOptions& cg) {
  StationaryProfile out;
  out.rho = rho0;
  out.residual = std::numeric_limits<double>::infinity();
  long n = 0;
  while (out.t < t_long) {
    const ScalarField u = limit_velocity(params, tables, out.rho, cg);
    const ScalarField next = continuity_step(grid, out.rho, u, dt);
    out.residual = (next - out.rho).abs().maxCoeff() / dt;
    ++n;
    if (!next.allFinite()) throw SimulationDiverged("stationary profile", n);
    out.rho = next;
    out.t += dt;
    if (out.residual <= settle_tol) {
      out.converged = true;
      break;
    }
  }
  out.u = limit_velocity(params, tables, out.rho, cg);
  return out;
}

LimitState run_limit(const PhaseGrid& grid, const ScalarField& rho0, const KernelTables& tables,
                     const ModelParams& params, double dt, double t_final, const CgOptions& cg,
                     const std::vector<double>& snapshot_times,
                     const std::function<void(const LimitState&)>& on_snapshot) {
  LimitState state;
  state.rho = rho0;
  state.u = limit_velocity(params, tables, state.rho, cg);

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
  emit_due();
  while (state.t < t_final) {
    const double goal = target != targets.end() ? *target : t_final;
    double step_dt = dt;
    bool landing = false;
    if (state.t + step_dt >= goal - 1e-12 * std::max(1.0, std::abs(goal))) {
      step_dt = goal - state.t;
      landing = true;
    }
    state.rho = continuity_step(grid, state.rho, state.u, step_dt);
    state.t = landing ? goal : state.t + step_dt;
    ++state.n;
    if (!state.rho.allFinite()) throw SimulationDiverged("limiting solver", state.n);
    state.u = limit_velocity(params, tables, state.rho, cg);
    emit_due();
  }
  return state;
}

}  // namespace vsap
