#include "vsap/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace vsap {

bool DiagnosticsRecord::finite() const noexcept {
  for (double v : {t, mass, momentum, max_grad_u, max_grad_rho_over_rho, max_grad_P_over_rho, G, R,
                   omega_max, omega_bound, first_xi_moment_max, boundary_mass_fraction}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

NonOscMonitors nonosc_monitors(const PhaseGrid& grid, const ScalarField& rho, const ScalarField& u,
                               const ScalarField& pressure) {
  const ScalarField rho_safe = floored(rho);
  NonOscMonitors out;
  out.max_grad_u = gradient_x(grid, u).abs().maxCoeff();
  out.max_grad_rho_over_rho = (gradient_x(grid, rho).abs() / rho_safe).maxCoeff();
  out.max_grad_P_over_rho = (gradient_x(grid, pressure).abs() / rho_safe).maxCoeff();
  return out;
}

double support_radius(const PhaseGrid& grid, const PhaseField& g, double threshold_frac) {
  const PhaseField clipped = g.max(0.0);
  const double peak = clipped.maxCoeff();
  if (!(peak > 0.0)) return 0.0;
  const double level = threshold_frac * peak;
  double radius = 0.0;
  for (int j = 0; j < grid.n_xi; ++j) {
    if ((clipped.col(j) > level).any()) {
      radius = std::max(radius, std::abs(grid.xi_centers[j]) + 0.5 * grid.dxi);
    }
  }
  return radius;
}

double boundary_mass_fraction(const PhaseGrid& grid, const PhaseField& g) {
  const double total = g.sum();
  if (total == 0.0) return 0.0;
  return (g.col(0).abs().sum() + g.col(grid.n_xi - 1).abs().sum()) / std::abs(total);
}

double first_xi_moment_max(const PhaseGrid& grid, const PhaseField& g) {
  return moment_1(grid, g).abs().maxCoeff();
}

double compare_fields(const ScalarField& a, const ScalarField& b, Norm norm, double dx) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_fields: grids differ");
  const ScalarField diff = (a - b).abs();
  return norm == Norm::L1 ? diff.sum() * dx : diff.maxCoeff();
}

double relative_difference(const ScalarField& a, const ScalarField& b, Norm norm, double dx) {
  const double scale = compare_fields(b, ScalarField::Zero(b.size()), norm, dx);
  return compare_fields(a, b, norm, dx) / scale;
}

DiagnosticsRecord make_record(const PhaseGrid& grid, const RescaledState& state, double omega_bound,
                              double support_threshold) {
  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.mass = integrate_x(grid, state.rho);
  rec.momentum = integrate_x(grid, state.m);
  const NonOscMonitors mon = nonosc_monitors(grid, state.rho, state.u, state.pressure);
  rec.max_grad_u = mon.max_grad_u;
  rec.max_grad_rho_over_rho = mon.max_grad_rho_over_rho;
  rec.max_grad_P_over_rho = mon.max_grad_P_over_rho;
  rec.G = state.g.abs().maxCoeff();
  rec.R = support_radius(grid, state.g, support_threshold);
  rec.omega_max = state.omega.abs().maxCoeff();
  rec.omega_bound = omega_bound;
  rec.first_xi_moment_max = first_xi_moment_max(grid, state.g);
  rec.boundary_mass_fraction = boundary_mass_fraction(grid, state.g);
  rec.cg_iters = state.cg_iterations;
  return rec;
}

}  // namespace vsap
