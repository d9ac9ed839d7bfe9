#include "vsap/transform.hpp"

#include "vsap/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace vsap {
namespace {

void require_positive(const ScalarField& omega, const char* where) {
  if (!(omega > 0.0).all()) {
    throw InvalidState(std::string(where) + ": scaling factor must be positive everywhere");
  }
}

void require_same_x(const PhaseGrid& a, const PhaseGrid& b, const char* where) {
  if (a.n_x != b.n_x) throw std::invalid_argument(std::string(where) + ": x-meshes differ");
}

}  // namespace

double interpolate_velocity(const PhaseGrid& grid, const PhaseField& field, int row, double v) {
  if (!(v > grid.xi_lo && v < grid.xi_hi)) return 0.0;
  // Fractional index relative to center 0; virtual zero nodes at -1 and n.
  double p = (v - grid.xi_centers[0]) / grid.dxi;
  const double nearest = std::round(p);
  if (std::abs(p - nearest) < 1e-12) p = nearest;
  const double base = std::floor(p);
  const double frac = p - base;
  const int j = static_cast<int>(base);
  auto at = [&](int k) { return (k < 0 || k >= grid.n_xi) ? 0.0 : field(row, k); };
  if (frac == 0.0) return at(j);
  return (1.0 - frac) * at(j) + frac * at(j + 1);
}

PhaseField transform_forward(const PhaseGrid& v_grid, const PhaseField& f, const ScalarField& u,
                             const ScalarField& omega, const PhaseGrid& xi_grid) {
  require_positive(omega, "transform_forward");
  require_same_x(v_grid, xi_grid, "transform_forward");
  PhaseField g(xi_grid.n_x, xi_grid.n_xi);
  for (int i = 0; i < xi_grid.n_x; ++i) {
    for (int j = 0; j < xi_grid.n_xi; ++j) {
      g(i, j) = omega[i] * interpolate_velocity(v_grid, f, i, u[i] + omega[i] * xi_grid.xi_centers[j]);
    }
  }
  return g;
}

PhaseField transform_inverse(const PhaseGrid& xi_grid, const PhaseField& g, const ScalarField& u,
                             const ScalarField& omega, const PhaseGrid& v_grid) {
  require_positive(omega, "transform_inverse");
  require_same_x(v_grid, xi_grid, "transform_inverse");
  PhaseField f(v_grid.n_x, v_grid.n_xi);
  for (int i = 0; i < v_grid.n_x; ++i) {
    for (int j = 0; j < v_grid.n_xi; ++j) {
      const double xi = (v_grid.xi_centers[j] - u[i]) / omega[i];
      f(i, j) = interpolate_velocity(xi_grid, g, i, xi) / omega[i];
    }
  }
  return f;
}

InitialTriple initialize_triple(const PhaseGrid& grid, const PhaseField& f0) {
  if (f0.rows() != grid.n_x || f0.cols() != grid.n_xi) {
    throw std::invalid_argument("initialize_triple: field does not match grid");
  }
  if (!f0.allFinite() || (f0 < 0.0).any()) {
    throw InvalidInput("initialize_triple: initial distribution must be finite and nonnegative");
  }
  InitialTriple triple;
  triple.rho = moment_0(grid, f0);
  triple.u = moment_1(grid, f0) / floored(triple.rho);
  triple.omega = grid.constant_x(1.0);
  triple.g = transform_forward(grid, f0, triple.u, triple.omega, grid);
  return triple;
}

}  // namespace vsap
