#pragma once

#include "vsap/kernels.hpp"

#include <functional>
#include <vector>

namespace vsap {

/// The collision operator in v-conservative form, Q(f) = d_v(c f), with
/// c(x, v) = A(x) v - J(x) + (K' * rho)(x). Aggregation has A = 1, J = 0;
/// the three-zone model has A = phi * rho and J = phi * (rho u).
struct CollisionCoefficients {
  ScalarField A;
  ScalarField J;
  ScalarField attraction;
};

CollisionCoefficients collision_coefficients(const ModelParams& params, const KernelTables& tables,
                                             const ScalarField& rho, const ScalarField& momentum);

/// c at (x_i, v).
double collision_flux_velocity(const CollisionCoefficients& coeffs, int i, double v);

/// min(dx / 20, 0.9 dv eps / max |c|, 0.9 dx / max |v|).
double reference_dt(const PhaseGrid& grid, const CollisionCoefficients& coeffs, double eps);

/// Reconstruction of f at v-faces. Upwind is plain donor cell. Limited adds
/// van Leer limited slopes in v and advances with Heun's method; the
/// x-flux stays donor cell in both.
enum class VelocityFlux { Upwind, Limited };

/// f^{n+1} = f^n - dt [D_x(v f) + (1/eps) D_v(-c f)] with upwinded fluxes,
/// periodic in x and zero flux through the v-boundaries.
PhaseField direct_step(const PhaseGrid& grid, const PhaseField& f, const ModelParams& params,
                       const KernelTables& tables, double dt, VelocityFlux scheme = VelocityFlux::Upwind);

struct ReferenceState {
  PhaseField f;
  double t = 0.0;
  long n = 0;
};

struct ReferenceRunResult {
  ReferenceState state;
  std::vector<double> times;
  std::vector<double> masses;
};

/// Integrates to t_final, landing exactly on each snapshot time. Throws
/// SimulationDiverged on non-finite values.
ReferenceRunResult run_reference(const PhaseGrid& grid, const PhaseField& f0, const ModelParams& params,
                                 const KernelTables& tables, double t_final,
                                 const std::vector<double>& snapshot_times = {},
                                 const std::function<void(const ReferenceState&)>& on_snapshot = {},
                                 VelocityFlux scheme = VelocityFlux::Upwind);

}  // namespace vsap
