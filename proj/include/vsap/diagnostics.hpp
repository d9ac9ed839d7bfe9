#pragma once

#include "vsap/state.hpp"

#include <vector>

namespace vsap {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double max_grad_u = 0.0;
  double max_grad_rho_over_rho = 0.0;
  double max_grad_P_over_rho = 0.0;
  double G = 0.0;  ///< max |g|
  double R = 0.0;  ///< xi-support radius
  double omega_max = 0.0;
  double omega_bound = 1.0;
  double first_xi_moment_max = 0.0;
  double boundary_mass_fraction = 0.0;
  int cg_iters = 0;

  bool finite() const noexcept;
};

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

struct NonOscMonitors {
  double max_grad_u = 0.0;
  double max_grad_rho_over_rho = 0.0;
  double max_grad_P_over_rho = 0.0;
};

/// Default relative threshold below which g counts as outside its support.
inline constexpr double kSupportThreshold = 1e-9;
/// Boundary-mass fraction above which a run reports a warning.
inline constexpr double kBoundaryMassWarning = 1e-8;

NonOscMonitors nonosc_monitors(const PhaseGrid& grid, const ScalarField& rho, const ScalarField& u,
                               const ScalarField& pressure);

/// max |xi_j| + dxi/2 over cells with g_ij > threshold_frac * max g
/// (negative values are clipped); 0 for g = 0.
double support_radius(const PhaseGrid& grid, const PhaseField& g,
                      double threshold_frac = kSupportThreshold);

/// Fraction of the total mass sitting in the outermost xi-cells.
double boundary_mass_fraction(const PhaseGrid& grid, const PhaseField& g);

/// max_i |sum_j xi_j g_ij dxi|.
double first_xi_moment_max(const PhaseGrid& grid, const PhaseField& g);

enum class Norm { L1, Linf };

/// L1 = sum |a - b| dx, Linf = max |a - b|. Throws std::invalid_argument on
/// length mismatch.
double compare_fields(const ScalarField& a, const ScalarField& b, Norm norm, double dx);

/// compare_fields(a, b) / compare_fields(b, 0).
double relative_difference(const ScalarField& a, const ScalarField& b, Norm norm, double dx);

DiagnosticsRecord make_record(const PhaseGrid& grid, const RescaledState& state, double omega_bound,
                              double support_threshold = kSupportThreshold);

}  // namespace vsap
