#pragma once

#include "vsap/cg.hpp"
#include "vsap/kernels.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace vsap {

/// u = -K' * rho.
ScalarField limit_velocity_aggregation(const KernelTables& tables, const ScalarField& rho);

/// (L u)_i = A_i u_i - sum_j phi_ij rho_j u_j dx.
ScalarField limit_operator(const KernelTables& tables, const ScalarField& rho, const ScalarField& u);

/// Solves L u = -K' * rho subject to sum_i rho_i u_i dx = 0, by CG in the
/// rho-weighted inner product with iterates projected off the constants.
/// The stopping test is ||L u + K' * rho||_inf <= rel_tol ||K' * rho||_inf.
/// Throws SolverFailure on non-convergence.
ScalarField limit_velocity_threezone(const KernelTables& tables, const ScalarField& rho,
                                     const CgOptions& cg = {}, int* iterations = nullptr);

ScalarField limit_velocity(const ModelParams& params, const KernelTables& tables, const ScalarField& rho,
                           const CgOptions& cg = {});

/// Donor-cell continuity update with face velocity (u_i + u_{i+1}) / 2.
ScalarField continuity_step(const PhaseGrid& grid, const ScalarField& rho, const ScalarField& u, double dt);

/// One step of the semi-discrete limiting system. With `safe_cfl` set,
/// throws StepRejected when dt max|u| / dx exceeds it.
ScalarField limit_step(const PhaseGrid& grid, const ScalarField& rho, const KernelTables& tables,
                       const ModelParams& params, double dt, const CgOptions& cg = {},
                       std::optional<double> safe_cfl = std::nullopt);

struct StationaryProfile {
  ScalarField rho;
  ScalarField u;
  double t = 0.0;
  double residual = 0.0;  ///< ||rho^{n+1} - rho^n||_inf / dt at exit
  bool converged = false;
};

/// Integrates the limiting system with step dt until the density residual
/// falls below settle_tol or t_long is reached.
StationaryProfile stationary_profile(const PhaseGrid& grid, const ScalarField& rho0, const KernelTables& tables,
                                     const ModelParams& params, double dt, double t_long,
                                     double settle_tol = 1e-8, const CgOptions& cg = {});

struct LimitState {
  ScalarField rho;
  ScalarField u;
  double t = 0.0;
  long n = 0;
};

/// Integrates the limiting system to t_final with step dt (the last step
/// shortened to land on it, likewise for snapshots).
LimitState run_limit(const PhaseGrid& grid, const ScalarField& rho0, const KernelTables& tables,
                     const ModelParams& params, double dt, double t_final, const CgOptions& cg = {},
                     const std::vector<double>& snapshot_times = {},
                     const std::function<void(const LimitState&)>& on_snapshot = {});

}  // namespace vsap
