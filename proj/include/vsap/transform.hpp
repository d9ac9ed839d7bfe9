#pragma once

#include "vsap/phase_space.hpp"

namespace vsap {

/// Linear interpolation of one velocity profile at v, with zero extension
/// past the truncated velocity domain.
double interpolate_velocity(const PhaseGrid& grid, const PhaseField& field, int row, double v);

/// g(x_i, xi_j) = omega_i f(x_i, u_i + omega_i xi_j). `f` lives on
/// `v_grid`, the result on `xi_grid`; both must share the x-mesh.
/// Throws InvalidState if omega <= 0 anywhere.
PhaseField transform_forward(const PhaseGrid& v_grid, const PhaseField& f, const ScalarField& u,
                             const ScalarField& omega, const PhaseGrid& xi_grid);

/// f(x_i, v_j) = g(x_i, (v_j - u_i) / omega_i) / omega_i.
PhaseField transform_inverse(const PhaseGrid& xi_grid, const PhaseField& g, const ScalarField& u,
                             const ScalarField& omega, const PhaseGrid& v_grid);

struct InitialTriple {
  PhaseField g;
  ScalarField rho;
  ScalarField u;
  ScalarField omega;
};

/// omega = 1, u = m / rho, g = f0 shifted by u. Throws InvalidInput for
/// negative entries of f0.
InitialTriple initialize_triple(const PhaseGrid& grid, const PhaseField& f0);

}  // namespace vsap
