#pragma once

#include "vsap/diagnostics.hpp"
#include "vsap/kernels.hpp"
#include "vsap/state.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vsap {

/// xi-flux velocity of the conservative rescaled transport at cell centers:
/// a_ij = xi_j^2 d_x omega_i + xi_j d_x u_i - d_x(omega^2 P)_i / (rho_i omega_i).
PhaseField xi_coefficient(const PhaseGrid& grid, const RescaledState& state);

/// Largest dt with CFL number `cfl` for both transport directions.
double admissible_dt(const PhaseGrid& grid, const RescaledState& state, double cfl);

/// Forward-Euler donor-cell update of g: periodic in x, zero flux through
/// the xi-boundaries. With `safe_cfl` set, throws StepRejected if dt exceeds
/// admissible_dt(grid, state, *safe_cfl).
PhaseField explicit_g_step(const PhaseGrid& grid, const RescaledState& state, double dt,
                           std::optional<double> safe_cfl = std::nullopt);

/// Explicit part of the momentum update: m - dt [d_x(m u) + d_x(omega^2 P)].
ScalarField momentum_rhs(const PhaseGrid& grid, const RescaledState& state, double dt);

/// (M m)_i = sum_j phi_ij (rho_j m_i - rho_i m_j) dx, the alignment part of
/// -rho B written as an operator on the momentum.
ScalarField alignment_operator(const KernelTables& tables, const ScalarField& rho, const ScalarField& m);

struct MomentumSolve {
  ScalarField m;
  int iterations = 0;
};

/// Implicit momentum update given rho^{n+1}. Aggregation uses the closed
/// form; the three-zone model solves (I + dt/eps M) m = rhs - dt/eps rho conv
/// by CG in the 1/rho-weighted inner product. Throws SolverFailure when CG
/// does not converge within the configured iterations.
MomentumSolve implicit_momentum_solve(const PhaseGrid& grid, const RescaledState& state,
                                      const ScalarField& rho_next, const KernelTables& tables,
                                      const ModelParams& params, double dt, const SolverConfig& config);

/// omega^{n+1} = (omega^n - dt u^n D_up omega^n) / (1 + dt A^{n+1} / eps).
ScalarField implicit_omega_update(const PhaseGrid& grid, const ScalarField& omega, const ScalarField& u,
                                  const ScalarField& a_next, double dt, double eps);

/// Time step selected by the configured rule for the current state.
double select_dt(const PhaseGrid& grid, const RescaledState& state, const SolverConfig& config);

/// One step of the scheme: g, then rho, then momentum, then omega.
RescaledState step(const PhaseGrid& grid, const RescaledState& state, const KernelTables& tables,
                   const ModelParams& params, const SolverConfig& config, double dt);

struct RunOptions {
  double t_final = 0.0;
  int diag_stride = 5;
  std::vector<double> snapshot_times;
  std::function<void(const RescaledState&)> on_snapshot;
  double support_threshold = kSupportThreshold;
};

struct RunResult {
  RescaledState state;
  DiagnosticsSeries series;
  std::vector<std::string> warnings;
};

/// Steps to t_final (the last step is shortened to land on it, and likewise
/// on every snapshot time). Diagnostics are sampled at step 0, every
/// `diag_stride` steps and at the final step. Throws SimulationDiverged on
/// any non-finite value.
RunResult run(const PhaseGrid& grid, const RescaledState& initial, const KernelTables& tables,
              const ModelParams& params, const SolverConfig& config, const RunOptions& options);

}  // namespace vsap
