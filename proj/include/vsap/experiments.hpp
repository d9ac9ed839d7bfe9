#pragma once

#include "vsap/kernels.hpp"
#include "vsap/state.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vsap {

enum class Preset { Ex1NonOsc, Ex2Consistency, Ex3AP, Ex4Application, HomogeneousExactness, Custom };

struct PresetInfo {
  Preset preset;
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& list_presets();
Preset preset_by_name(const std::string& name);
std::string preset_name(Preset preset);

struct GridSpec {
  int n_x = 128;
  int n_xi = 64;
  double xi_max = 6.0;
};

struct ExperimentConfig {
  Preset preset = Preset::Custom;
  ModelParams model;  ///< eps is overwritten per member of eps_list
  GridSpec grid;
  std::vector<double> eps_list;
  double t_final = 1.0;
  SolverConfig solver;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int diag_stride = 5;

  int reference_n_v = 512;        ///< direct solver velocity cells (Ex2)
  bool with_reference = false;    ///< run the direct kinetic solver
  bool reference_limited = true;  ///< limited v-reconstruction in the direct solver
  bool with_limit = false;        ///< run the limiting system to t_final
  bool with_stationary = false;   ///< compute the stationary limiting profile
  double stationary_t_long = 0.0;  ///< horizon of the stationary run; <= 0 means t_final
  double settle_tol = 1e-8;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Default configuration of each preset on the 128 x 64 grid.
ExperimentConfig build_preset(Preset preset);

struct InitialData {
  PhaseField g0;
  ScalarField u0;
  ScalarField omega0;
};

/// Maxwellian exp(-xi^2/2) / sqrt(2 pi).
double maxwellian(double xi);
/// Equal-weight mixture of Gaussians of variance 0.2 centered at +-shift.
double double_gaussian(double xi, double shift);
/// Initial density of each preset as a function of x.
double initial_density(Preset preset, double x);

/// Samples the initial triple of the preset on `grid` (seeded perturbation
/// for Custom when config.seed != 0).
InitialData initial_data(const ExperimentConfig& config, const PhaseGrid& grid);
/// Ex2 initial distribution f0(x, v) on a velocity grid.
PhaseField consistency_f0(const PhaseGrid& v_grid);

PhaseGrid make_grid(const GridSpec& spec);

struct ExperimentRun {
  std::string solver;  ///< rescaled | direct | limit | stationary
  double eps = 0.0;
  int n_x = 0;
  int n_v = 0;
  std::string directory;
  std::string diagnostics;  ///< empty when the solver writes none
  std::vector<std::string> snapshots;
  long steps = 0;
  double t_final = 0.0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();
};

struct Manifest {
  ExperimentConfig config;
  std::vector<ExperimentRun> runs;
  std::string provenance;
  std::string path;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
};

std::string provenance_string();

/// Runs every solver the preset calls for, writes diagnostics, snapshots
/// and `manifest.json` under output_dir, and returns the manifest. Members
/// of eps_list run concurrently.
Manifest run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace vsap
