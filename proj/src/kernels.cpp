#include "vsap/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace vsap {

void ModelParams::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("model: eps must be positive");
  if (!(potential.l_a > 0.0) || !(potential.l_r > 0.0)) {
    throw std::invalid_argument("model: potential length scales must be positive");
  }
  if (model == Model::ThreeZone && !influence) {
    throw std::invalid_argument("model: three-zone model requires an influence function");
  }
}

PotentialSpec potential_by_name(std::string_view name) {
  if (name == "morse") return PotentialSpec::morse();
  if (name == "morse-rescaled") return PotentialSpec::morse_rescaled();
  if (name == "none") return PotentialSpec::none();
  throw std::invalid_argument("unknown potential '" + std::string(name) + "'");
}

InfluenceSpec influence_by_name(std::string_view name) {
  if (name == "inverse-sqrt") return InfluenceSpec{};
  throw std::invalid_argument("unknown influence function '" + std::string(name) + "'");
}

Model model_by_name(std::string_view name) {
  if (name == "aggregation") return Model::Aggregation;
  if (name == "threezone" || name == "three-zone") return Model::ThreeZone;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string to_string(Model model) {
  return model == Model::Aggregation ? "aggregation" : "threezone";
}

std::string potential_name(const PotentialSpec& spec) {
  auto same = [&](const PotentialSpec& o) {
    return spec.c_a == o.c_a && spec.l_a == o.l_a && spec.c_r == o.c_r && spec.l_r == o.l_r;
  };
  if (same(PotentialSpec::morse())) return "morse";
  if (same(PotentialSpec::morse_rescaled())) return "morse-rescaled";
  if (spec.c_a == 0.0 && spec.c_r == 0.0) return "none";
  return "custom";
}

double potential_grad(const PotentialSpec& spec, double z) {
  if (z == 0.0) return 0.0;
  const double r = std::abs(z);
  const double magnitude =
      spec.c_a / spec.l_a * std::exp(-r / spec.l_a) - spec.c_r / spec.l_r * std::exp(-r / spec.l_r);
  return z > 0.0 ? magnitude : -magnitude;
}

double influence_eval(const InfluenceSpec&, double r) { return 1.0 / std::sqrt(1.0 + r * r); }

KernelTables build_tables(const PhaseGrid& grid, const ModelParams& params) {
  const int n = grid.n_x;
  // Offsets k = (i - j) mod n are mapped to the minimal image; building the
  // tables from integer offsets keeps the symmetries exact.
  Eigen::ArrayXd grad_by_offset(n);
  Eigen::ArrayXd phi_by_offset(n);
  for (int k = 0; k < n; ++k) {
    const bool antipodal = 2 * k == n;
    const double z = (2 * k < n) ? k * grid.dx : (k - n) * grid.dx;
    grad_by_offset[k] = (k == 0 || antipodal) ? 0.0 : potential_grad(params.potential, z);
    phi_by_offset[k] =
        params.influence ? influence_eval(*params.influence, antipodal ? kPi : std::abs(z)) : 0.0;
  }

  KernelTables tables;
  tables.dx = grid.dx;
  tables.grad_k.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tables.grad_k(i, j) = grad_by_offset[grid.wrap(i - j)];

  if (params.model == Model::ThreeZone) {
    if (!params.influence) throw std::invalid_argument("build_tables: missing influence function");
    tables.phi.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tables.phi(i, j) = phi_by_offset[grid.wrap(i - j)];
  }
  return tables;
}

ScalarField conv_gradK(const KernelTables& tables, const ScalarField& rho) {
  return (tables.grad_k * rho.matrix()).array() * tables.dx;
}

ScalarField conv_phi(const KernelTables& tables, const ScalarField& field) {
  if (!tables.has_influence()) throw std::invalid_argument("conv_phi: tables carry no influence kernel");
  return (tables.phi * field.matrix()).array() * tables.dx;
}

ScalarField compute_A(const ModelParams& params, const KernelTables& tables, const ScalarField& rho) {
  if (params.model == Model::Aggregation) return ScalarField::Ones(rho.size());
  return conv_phi(tables, rho);
}

ScalarField compute_B(const ModelParams& params, const KernelTables& tables, const ScalarField& rho,
                      const ScalarField& u) {
  const ScalarField attraction = conv_gradK(tables, rho);
  if (params.model == Model::Aggregation) return -u - attraction;
  // sum_j phi_ij (u_j - u_i) rho_j dx = (phi (rho u))_i dx - u_i A_i
  const ScalarField rho_u = rho * u;
  return conv_phi(tables, rho_u) - u * conv_phi(tables, rho) - attraction;
}

double alignment_lower_bound(const ModelParams& params, double mass) {
  if (params.model == Model::Aggregation) return 1.0;
  return influence_eval(*params.influence, kPi) * mass;
}

}  // namespace vsap
