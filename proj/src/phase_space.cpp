#include "vsap/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace vsap {

PhaseGrid build_grid(int n_x, int n_xi, double xi_max) {
  if (n_x < 2 || n_xi < 2) {
    throw std::invalid_argument("build_grid: n_x and n_xi must be at least 2");
  }
  if (!(xi_max > 0.0) || !std::isfinite(xi_max)) {
    throw std::invalid_argument("build_grid: xi_max must be positive");
  }
  PhaseGrid grid;
  grid.n_x = n_x;
  grid.n_xi = n_xi;
  grid.x_lo = -kPi;
  grid.x_hi = kPi;
  grid.xi_lo = -xi_max;
  grid.xi_hi = xi_max;
  grid.dx = (grid.x_hi - grid.x_lo) / n_x;
  grid.dxi = (grid.xi_hi - grid.xi_lo) / n_xi;
  // Centers are built as (k - (n-1)/2) * width so mirrored cells are exact
  // negatives of each other.
  grid.x_centers.resize(n_x);
  for (int i = 0; i < n_x; ++i) grid.x_centers[i] = (i - 0.5 * (n_x - 1)) * grid.dx;
  grid.xi_centers.resize(n_xi);
  for (int j = 0; j < n_xi; ++j) grid.xi_centers[j] = (j - 0.5 * (n_xi - 1)) * grid.dxi;
  return grid;
}

double wrap_periodic(double z) {
  if (z >= -kPi && z < kPi) return z;
  constexpr double period = 2.0 * kPi;
  double r = z - period * std::floor((z + kPi) / period);
  if (r >= kPi) r -= period;
  if (r < -kPi) r += period;
  return r;
}

}  // namespace vsap
