#pragma once

#include "vsap/phase_space.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace vsap {

enum class Model { Aggregation, ThreeZone };

/// Morse potential K(x) = -c_a exp(-|x|/l_a) + c_r exp(-|x|/l_r).
struct PotentialSpec {
  double c_a = 1.0;
  double l_a = 2.0;
  double c_r = 1.0;
  double l_r = 1.0;

  static PotentialSpec morse() { return {1.0, 2.0, 1.0, 1.0}; }
  static PotentialSpec morse_rescaled() { return {1.0, 1.0, 1.0, 0.5}; }
  /// K = 0; used to isolate the alignment operator.
  static PotentialSpec none() { return {0.0, 1.0, 0.0, 1.0}; }
};

/// phi(r) = 1 / sqrt(1 + r^2).
struct InfluenceSpec {
  enum class Kind { InverseSqrt };
  Kind kind = Kind::InverseSqrt;
};

struct ModelParams {
  Model model = Model::ThreeZone;
  double eps = 1.0;
  PotentialSpec potential = PotentialSpec::morse();
  std::optional<InfluenceSpec> influence = InfluenceSpec{};

  /// Throws std::invalid_argument for eps <= 0, non-positive lengths, or a
  /// three-zone model without an influence function.
  void validate() const;
};

PotentialSpec potential_by_name(std::string_view name);
InfluenceSpec influence_by_name(std::string_view name);
Model model_by_name(std::string_view name);
std::string to_string(Model model);
std::string potential_name(const PotentialSpec& spec);

/// K'(z) for z in [-pi, pi); K'(0) is defined as 0.
double potential_grad(const PotentialSpec& spec, double z);
/// phi(r), r >= 0.
double influence_eval(const InfluenceSpec& spec, double r);

/// Dense kernel matrices on the periodic x-grid, evaluated at the minimal
/// periodic image of x_i - x_j. The antipodal offset (|x_i - x_j| = pi on
/// even grids) gets grad_k = 0, like the origin, so grad_k is exactly
/// antisymmetric.
struct KernelTables {
  Eigen::MatrixXd grad_k;
  Eigen::MatrixXd phi;  // empty for the aggregation model
  double dx = 0.0;

  bool has_influence() const noexcept { return phi.size() > 0; }
};

KernelTables build_tables(const PhaseGrid& grid, const ModelParams& params);

/// out_i = sum_j grad_k(i, j) rho_j dx.
ScalarField conv_gradK(const KernelTables& tables, const ScalarField& rho);
/// out_i = sum_j phi(i, j) field_j dx.
ScalarField conv_phi(const KernelTables& tables, const ScalarField& field);

ScalarField compute_A(const ModelParams& params, const KernelTables& tables, const ScalarField& rho);
ScalarField compute_B(const ModelParams& params, const KernelTables& tables, const ScalarField& rho,
                      const ScalarField& u);

/// Lower bound c of A on the torus for a density of the given total mass:
/// 1 for aggregation, phi(pi) * mass for the three-zone model.
double alignment_lower_bound(const ModelParams& params, double mass);

}  // namespace vsap
