#pragma once

#include <Eigen/Dense>

#include <numbers>

namespace vsap {

/// Length-n_x array of cell averages (rho, u, m, omega, P, A, B).
using ScalarField = Eigen::ArrayXd;
/// n_x by n_xi array of phase-space cell averages; row i is the velocity
/// profile at x_i.
using PhaseField = Eigen::ArrayXXd;

inline constexpr double kPi = std::numbers::pi;
/// Lower bound applied to densities before dividing by them.
inline constexpr double kDensityFloor = 1e-14;

/// Uniform cell-centered mesh on the torus [-pi, pi) times [-xi_max, xi_max].
/// The same type is used for the rescaled variable xi and the physical
/// velocity v.
struct PhaseGrid {
  int n_x = 0;
  int n_xi = 0;
  double x_lo = -kPi;
  double x_hi = kPi;
  double xi_lo = 0.0;
  double xi_hi = 0.0;
  double dx = 0.0;
  double dxi = 0.0;
  Eigen::ArrayXd x_centers;
  Eigen::ArrayXd xi_centers;

  /// Periodic index in x.
  int wrap(int i) const noexcept {
    const int r = i % n_x;
    return r < 0 ? r + n_x : r;
  }
  double xi_max() const noexcept { return xi_hi; }
  double length_x() const noexcept { return x_hi - x_lo; }
  /// Velocity of the face between cells j-1 and j (j = 0..n_xi).
  double xi_face(int j) const noexcept { return xi_lo + j * dxi; }

  PhaseField zeros() const { return PhaseField::Zero(n_x, n_xi); }
  ScalarField zeros_x() const { return ScalarField::Zero(n_x); }
  ScalarField constant_x(double value) const { return ScalarField::Constant(n_x, value); }

  bool same_shape(const PhaseGrid& other) const noexcept {
    return n_x == other.n_x && n_xi == other.n_xi && xi_hi == other.xi_hi;
  }
};

/// Throws std::invalid_argument unless n_x >= 2, n_xi >= 2 and xi_max > 0.
PhaseGrid build_grid(int n_x, int n_xi, double xi_max);

/// Shifts z by multiples of 2 pi into [-pi, pi).
double wrap_periodic(double z);

/// Donor-cell flux through a face with the given speed.
inline double upwind_flux(double speed, double left, double right) noexcept {
  return speed > 0.0 ? speed * left : speed * right;
}

/// Periodic central difference (f[i+1] - f[i-1]) / (2 dx).
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> gradient_x(
    const PhaseGrid& grid, const Eigen::ArrayBase<Derived>& field) {
  using Scalar = typename Derived::Scalar;
  const int n = grid.n_x;
  eigen_assert(field.size() == n);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  const Scalar inv = Scalar(1) / (Scalar(2) * Scalar(grid.dx));
  for (int i = 0; i < n; ++i) {
    out[i] = (field[grid.wrap(i + 1)] - field[grid.wrap(i - 1)]) * inv;
  }
  return out;
}

/// rho_i = sum_j f_ij dxi.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> moment_0(
    const PhaseGrid& grid, const Eigen::ArrayBase<Derived>& f) {
  return f.rowwise().sum() * typename Derived::Scalar(grid.dxi);
}

/// m_i = sum_j xi_j f_ij dxi. Mirrored cells are paired before summing so
/// that data even in xi gives exactly zero.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> moment_1(
    const PhaseGrid& grid, const Eigen::ArrayBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  const int nv = grid.n_xi;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) {
    Scalar acc(0);
    for (int j = 0; j < nv / 2; ++j) {
      const int mirror = nv - 1 - j;
      acc += Scalar(grid.xi_centers[mirror]) * (f(i, mirror) - f(i, j));
    }
    out[i] = acc * Scalar(grid.dxi);
  }
  return out;
}

/// P_i = sum_j xi_j^2 g_ij dxi.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> moment_2_centered(
    const PhaseGrid& grid, const Eigen::ArrayBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Array<Scalar, 1, Eigen::Dynamic> xi2 =
      grid.xi_centers.square().transpose().template cast<Scalar>();
  return (g.rowwise() * xi2).rowwise().sum() * Scalar(grid.dxi);
}

/// sum_i field_i dx.
template <typename Derived>
typename Derived::Scalar integrate_x(const PhaseGrid& grid, const Eigen::ArrayBase<Derived>& field) {
  return field.sum() * typename Derived::Scalar(grid.dx);
}

/// Elementwise max(rho, kDensityFloor).
template <typename Derived>
auto floored(const Eigen::ArrayBase<Derived>& rho) {
  return rho.max(typename Derived::Scalar(kDensityFloor));
}

}  // namespace vsap
