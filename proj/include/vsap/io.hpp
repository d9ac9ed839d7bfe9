#pragma once

#include "vsap/diagnostics.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace vsap::io {

/// Shortest text that round-trips the double (17 significant digits).
std::string format_double(double value);

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,momentum,max_grad_u,max_grad_rho_over_rho,max_grad_P_over_rho,G,R,omega_max,omega_bound,"
    "first_xi_moment_max,boundary_mass_fraction,cg_iters";

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);
DiagnosticsSeries read_diagnostics_csv(const std::filesystem::path& path);

/// A snapshot file: one metadata line `# key=value ...` followed by rows of
/// comma-separated numbers. Macro snapshots carry `columns=a,b,...`; phase
/// snapshots are n_x rows of n_v values.
struct Snapshot {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  Eigen::ArrayXXd data;

  std::string kind() const;
  double meta_number(const std::string& key) const;
  /// Column lookup for macro snapshots; throws std::invalid_argument if absent.
  Eigen::ArrayXd column(const std::string& name) const;
};

void write_macro_snapshot(const std::filesystem::path& path, const PhaseGrid& grid, double t,
                          const std::vector<std::pair<std::string, ScalarField>>& columns,
                          const std::map<std::string, std::string>& extra_meta = {});
void write_phase_snapshot(const std::filesystem::path& path, const PhaseGrid& grid, double t,
                          const PhaseField& field, const std::string& variable,
                          const std::map<std::string, std::string>& extra_meta = {});
Snapshot read_snapshot(const std::filesystem::path& path);

/// Distance between two snapshots. Macro snapshots compare one column with
/// weight dx; phase snapshots compare the whole matrix with weight dx dv.
/// Throws std::invalid_argument if the grids differ.
double compare_snapshots(const Snapshot& a, const Snapshot& b, Norm norm, const std::string& field = "rho");
/// Norm of one snapshot field (the whole matrix for phase snapshots), same weights as compare_snapshots.
double snapshot_norm(const Snapshot& s, Norm norm, const std::string& field = "rho");

}  // namespace vsap::io
