#include "vsap/experiments.hpp"

#include "vsap/io.hpp"
#include "vsap/limiting_solver.hpp"
#include "vsap/reference_solver.hpp"
#include "vsap/rescaled_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <stdexcept>

#ifndef VSAP_GIT_REVISION
#define VSAP_GIT_REVISION "unknown"
#endif

namespace vsap {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

std::string eps_label(double eps) { return "eps" + io::format_double(eps); }

std::string dt_rule_name(const DtRule& rule) {
  switch (rule.kind) {
    case DtRule::Kind::Fixed:
      return "fixed:" + io::format_double(rule.value);
    case DtRule::Kind::Safe:
      return "safe:" + io::format_double(rule.value);
    case DtRule::Kind::Standard:
      break;
  }
  return "paper";
}

double bump(double x, double center, double width) { return std::exp(-width * (x - center) * (x - center)); }

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets = {
      {Preset::Ex1NonOsc, "ex1-nonosc", "three-zone, two bumps; non-oscillatory monitors across eps"},
      {Preset::Ex2Consistency, "ex2-consistency", "three-zone, eps=1, t=0.7; rescaled vs direct kinetic solver"},
      {Preset::Ex3AP, "ex3-ap", "three-zone, eps in {1,..,1e-3} vs the limiting system at t=1"},
      {Preset::Ex4Application, "ex4-application", "aggregation, rescaled Morse, counter-moving groups"},
      {Preset::HomogeneousExactness, "homogeneous", "x-uniform triple, 1000 steps; g must not change"},
      {Preset::Custom, "custom", "two-bump data with user-selected model and kernels"},
  };
  return presets;
}

Preset preset_by_name(const std::string& name) {
  for (const auto& p : list_presets())
    if (p.name == name) return p.preset;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string preset_name(Preset preset) {
  for (const auto& p : list_presets())
    if (p.preset == preset) return p.name;
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (eps_list.empty()) throw std::invalid_argument("eps_list must not be empty");
  for (double e : eps_list)
    if (!(e > 0.0)) throw std::invalid_argument("every eps must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be nonnegative");
  if (grid.n_x < 2 || grid.n_xi < 2 || !(grid.xi_max > 0.0)) throw std::invalid_argument("invalid grid");
  if (!(solver.cg_rel_tol > 0.0)) throw std::invalid_argument("cg tolerance must be positive");
  if (diag_stride < 1) throw std::invalid_argument("diagnostics stride must be positive");
  ModelParams probe = model;
  probe.eps = eps_list.front();
  probe.validate();
}

double maxwellian(double xi) { return std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * kPi); }

double double_gaussian(double xi, double shift) {
  const double a = xi + shift;
  const double b = xi - shift;
  return (std::exp(-a * a / 0.4) + std::exp(-b * b / 0.4)) / (2.0 * std::sqrt(0.4 * kPi));
}

double initial_density(Preset preset, double x) {
  switch (preset) {
    case Preset::Ex2Consistency:
      return 1.0 + bump(x, 1.0, 20.0) + 1.5 * bump(x, -1.0, 20.0);
    case Preset::Ex3AP:
      return 0.01 + bump(x, 0.0, 20.0);
    case Preset::Ex4Application:
      return 1e-8 + bump(x, 0.0, 40.0);
    case Preset::HomogeneousExactness:
      return 1.0;
    case Preset::Ex1NonOsc:
    case Preset::Custom:
      break;
  }
  return 1.0 + bump(x, 1.0, 20.0) + bump(x, -1.0, 20.0);
}

ExperimentConfig build_preset(Preset preset) {
  ExperimentConfig c;
  c.preset = preset;
  c.model.model = Model::ThreeZone;
  c.model.potential = PotentialSpec::morse();
  c.model.influence = InfluenceSpec{};
  switch (preset) {
    case Preset::Ex1NonOsc:
      c.eps_list = {1e-2, 1e-3, 1e-4};
      c.t_final = 1.0;
      c.snapshot_times = {0.0, 0.5, 1.0};
      break;
    case Preset::Ex2Consistency:
      c.eps_list = {1.0};
      c.t_final = 0.7;
      c.snapshot_times = {0.0, 0.35, 0.7};
      c.with_reference = true;
      break;
    case Preset::Ex3AP:
      c.eps_list = {1.0, 1e-1, 1e-2, 1e-3};
      c.t_final = 1.0;
      c.snapshot_times = {0.0, 1.0};
      c.with_limit = true;
      break;
    case Preset::Ex4Application:
      c.model.model = Model::Aggregation;
      c.model.potential = PotentialSpec::morse_rescaled();
      c.model.influence.reset();
      c.eps_list = {1.0, 1e-4};
      c.t_final = 3000.0;
      c.snapshot_times = {0.0, 1.0, 5.0, 10.0, 25.0, 50.0, 200.0, 1000.0, 3000.0};
      c.stationary_t_long = 20000.0;
      c.with_stationary = true;
      break;
    case Preset::HomogeneousExactness:
      c.eps_list = {1e-2};
      c.t_final = 1000.0 * (2.0 * kPi / c.grid.n_x) / 20.0;
      c.snapshot_times = {c.t_final};
      break;
    case Preset::Custom:
      c.eps_list = {1e-2};
      c.t_final = 1.0;
      c.snapshot_times = {0.0, 1.0};
      break;
  }
  return c;
}

PhaseGrid make_grid(const GridSpec& spec) { return build_grid(spec.n_x, spec.n_xi, spec.xi_max); }

PhaseField consistency_f0(const PhaseGrid& v_grid) {
  PhaseField f(v_grid.n_x, v_grid.n_xi);
  for (int i = 0; i < v_grid.n_x; ++i) {
    const double x = v_grid.x_centers[i];
    const double rho = initial_density(Preset::Ex2Consistency, x);
    for (int j = 0; j < v_grid.n_xi; ++j) f(i, j) = rho * double_gaussian(v_grid.xi_centers[j], std::sin(x));
  }
  return f;
}

InitialData initial_data(const ExperimentConfig& config, const PhaseGrid& grid) {
  InitialData data;
  data.omega0 = grid.constant_x(1.0);
  data.u0 = grid.zeros_x();
  if (config.preset == Preset::Ex2Consistency) {
    data.g0 = consistency_f0(grid);
    return data;
  }

  ScalarField rho(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) rho[i] = initial_density(config.preset, grid.x_centers[i]);
  if (config.preset == Preset::Custom && config.seed != 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> amplitude(0.0, 1.0 / 3.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int k = 1; k <= 3; ++k) {
      const double a = amplitude(rng);
      const double theta = phase(rng);
      rho *= 1.0 + 0.1 * a * (k * grid.x_centers + theta).cos();
    }
  }
  if (config.preset == Preset::HomogeneousExactness) data.u0 = grid.constant_x(0.5);

  data.g0.resize(grid.n_x, grid.n_xi);
  for (int j = 0; j < grid.n_xi; ++j) {
    const double xi = grid.xi_centers[j];
    const double profile = config.preset == Preset::Ex4Application ? double_gaussian(xi, 2.0) : maxwellian(xi);
    data.g0.col(j) = rho * profile;
  }
  return data;
}

std::string provenance_string() { return std::string("vsap 0.1.0 (git ") + VSAP_GIT_REVISION + ")"; }

namespace {

ExperimentRun run_rescaled_member(const ExperimentConfig& config, const PhaseGrid& grid, const KernelTables& tables,
                                  double eps, const fs::path& root) {
  const auto start = Clock::now();
  ExperimentRun rec;
  rec.solver = "rescaled";
  rec.eps = eps;
  rec.n_x = grid.n_x;
  rec.n_v = grid.n_xi;
  rec.directory = "rescaled_" + eps_label(eps);
  const fs::path dir = root / rec.directory;
  fs::create_directories(dir);

  ModelParams params = config.model;
  params.eps = eps;
  const InitialData init = initial_data(config, grid);
  const RescaledState initial = make_state(grid, init.g0, init.u0, init.omega0);

  RunOptions options;
  options.t_final = config.t_final;
  options.diag_stride = config.diag_stride;
  options.snapshot_times = config.snapshot_times;
  const std::map<std::string, std::string> meta = {{"solver", "rescaled"}, {"eps", io::format_double(eps)}};
  options.on_snapshot = [&](const RescaledState& s) {
    const std::string label = time_label(s.t);
    io::write_macro_snapshot(dir / ("macro_t" + label + ".csv"), grid, s.t,
                             {{"rho", s.rho}, {"m", s.m}, {"u", s.u}, {"omega", s.omega}, {"P", s.pressure}}, meta);
    io::write_phase_snapshot(dir / ("g_t" + label + ".csv"), grid, s.t, s.g, "g", meta);
    rec.snapshots.push_back(rec.directory + "/macro_t" + label + ".csv");
    rec.snapshots.push_back(rec.directory + "/g_t" + label + ".csv");
  };

  const RunResult result = run(grid, initial, tables, params, config.solver, options);
  if (!result.series.empty()) {
    rec.diagnostics = rec.directory + "/diagnostics.csv";
    io::write_diagnostics_csv(root / rec.diagnostics, result.series);
  }
  rec.steps = result.state.n;
  rec.t_final = result.state.t;
  rec.mass_initial = integrate_x(grid, initial.rho);
  rec.mass_final = integrate_x(grid, result.state.rho);
  rec.warnings = result.warnings;
  rec.wall_seconds = seconds_since(start);
  return rec;
}

ExperimentRun run_direct_member(const ExperimentConfig& config, const KernelTables& tables, double eps,
                                const fs::path& root) {
  const auto start = Clock::now();
  const PhaseGrid v_grid = build_grid(config.grid.n_x, config.reference_n_v, config.grid.xi_max);
  ExperimentRun rec;
  rec.solver = "direct";
  rec.eps = eps;
  rec.n_x = v_grid.n_x;
  rec.n_v = v_grid.n_xi;
  rec.directory = "direct_" + eps_label(eps);
  const fs::path dir = root / rec.directory;
  fs::create_directories(dir);

  ModelParams params = config.model;
  params.eps = eps;
  const PhaseField f0 = consistency_f0(v_grid);
  const std::map<std::string, std::string> meta = {{"solver", "direct"}, {"eps", io::format_double(eps)}};
  auto on_snapshot = [&](const ReferenceState& s) {
    const std::string label = time_label(s.t);
    const ScalarField rho = moment_0(v_grid, s.f);
    const ScalarField m = moment_1(v_grid, s.f);
    io::write_macro_snapshot(dir / ("macro_t" + label + ".csv"), v_grid, s.t,
                             {{"rho", rho}, {"m", m}, {"u", ScalarField(m / floored(rho))}}, meta);
    io::write_phase_snapshot(dir / ("f_t" + label + ".csv"), v_grid, s.t, s.f, "f", meta);
    rec.snapshots.push_back(rec.directory + "/macro_t" + label + ".csv");
    rec.snapshots.push_back(rec.directory + "/f_t" + label + ".csv");
  };
  const ReferenceRunResult result =
      run_reference(v_grid, f0, params, tables, config.t_final, config.snapshot_times, on_snapshot,
                    config.reference_limited ? VelocityFlux::Limited : VelocityFlux::Upwind);
  rec.steps = result.state.n;
  rec.t_final = result.state.t;
  rec.mass_initial = result.masses.front();
  rec.mass_final = result.masses.back();
  rec.wall_seconds = seconds_since(start);
  return rec;
}

ExperimentRun run_limit_member(const ExperimentConfig& config, const PhaseGrid& grid, const KernelTables& tables,
                               const fs::path& root) {
  const auto start = Clock::now();
  ExperimentRun rec;
  rec.solver = "limit";
  rec.n_x = grid.n_x;
  rec.directory = "limit";
  const fs::path dir = root / rec.directory;
  fs::create_directories(dir);

  ScalarField rho0(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) rho0[i] = initial_density(config.preset, grid.x_centers[i]);
  const CgOptions cg{config.solver.cg_rel_tol, config.solver.cg_max_iter};
  const std::map<std::string, std::string> meta = {{"solver", "limit"}};
  auto on_snapshot = [&](const LimitState& s) {
    const std::string label = time_label(s.t);
    io::write_macro_snapshot(dir / ("macro_t" + label + ".csv"), grid, s.t,
                             {{"rho", s.rho}, {"m", ScalarField(s.rho * s.u)}, {"u", s.u}}, meta);
    rec.snapshots.push_back(rec.directory + "/macro_t" + label + ".csv");
  };
  const LimitState final_state = run_limit(grid, rho0, tables, config.model, grid.dx / 20.0, config.t_final, cg,
                                           config.snapshot_times, on_snapshot);
  rec.steps = final_state.n;
  rec.t_final = final_state.t;
  rec.mass_initial = integrate_x(grid, rho0);
  rec.mass_final = integrate_x(grid, final_state.rho);
  rec.wall_seconds = seconds_since(start);
  return rec;
}

ExperimentRun run_stationary_member(const ExperimentConfig& config, const PhaseGrid& grid,
                                    const KernelTables& tables, const fs::path& root) {
  const auto start = Clock::now();
  ExperimentRun rec;
  rec.solver = "stationary";
  rec.n_x = grid.n_x;
  rec.directory = "stationary";
  fs::create_directories(root / rec.directory);

  ScalarField rho0(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) rho0[i] = initial_density(config.preset, grid.x_centers[i]);
  const CgOptions cg{config.solver.cg_rel_tol, config.solver.cg_max_iter};
  const double t_long = config.stationary_t_long > 0.0 ? config.stationary_t_long : config.t_final;
  const StationaryProfile prof = stationary_profile(grid, rho0, tables, config.model, grid.dx / 20.0,
                                                    t_long, config.settle_tol, cg);
  const std::string file = rec.directory + "/stationary.csv";
  io::write_macro_snapshot(root / file, grid, prof.t,
                           {{"rho", prof.rho}, {"m", ScalarField(prof.rho * prof.u)}, {"u", prof.u}},
                           {{"solver", "stationary"}, {"converged", prof.converged ? "true" : "false"}});
  rec.snapshots.push_back(file);
  rec.t_final = prof.t;
  rec.steps = std::lround(prof.t / (grid.dx / 20.0));
  rec.mass_initial = integrate_x(grid, rho0);
  rec.mass_final = integrate_x(grid, prof.rho);
  rec.extra = {{"converged", prof.converged}, {"residual", prof.residual}, {"settle_tol", config.settle_tol}};
  if (!prof.converged) rec.warnings.push_back("stationary profile did not settle within t_long");
  rec.wall_seconds = seconds_since(start);
  return rec;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json model = {{"model", to_string(c.model.model)},
                          {"potential", potential_name(c.model.potential)},
                          {"c_a", c.model.potential.c_a},
                          {"l_a", c.model.potential.l_a},
                          {"c_r", c.model.potential.c_r},
                          {"l_r", c.model.potential.l_r},
                          {"influence", c.model.influence ? "inverse-sqrt" : "none"}};
  return {{"preset", preset_name(c.preset)},
          {"model", model},
          {"grid", {{"n_x", c.grid.n_x}, {"n_xi", c.grid.n_xi}, {"xi_max", c.grid.xi_max}}},
          {"eps_list", c.eps_list},
          {"t_final", c.t_final},
          {"dt_rule", dt_rule_name(c.solver.dt_rule)},
          {"cg_rel_tol", c.solver.cg_rel_tol},
          {"cg_max_iter", c.solver.cg_max_iter},
          {"positivity_clip", c.solver.positivity_clip},
          {"snapshot_times", c.snapshot_times},
          {"seed", c.seed},
          {"diag_stride", c.diag_stride},
          {"reference_n_v", c.reference_n_v},
          {"with_reference", c.with_reference},
          {"reference_v_flux", c.reference_limited ? "limited" : "upwind"},
          {"with_limit", c.with_limit},
          {"with_stationary", c.with_stationary},
          {"stationary_t_long", c.stationary_t_long},
          {"settle_tol", c.settle_tol},
          {"monitors",
           {{"gradient", "central periodic"}, {"density_floor", kDensityFloor}, {"support_threshold", 1e-9}}}};
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) {
    runs_json.push_back({{"solver", r.solver},
                         {"eps", r.eps},
                         {"n_x", r.n_x},
                         {"n_v", r.n_v},
                         {"directory", r.directory},
                         {"diagnostics", r.diagnostics},
                         {"snapshots", r.snapshots},
                         {"steps", r.steps},
                         {"t_final", r.t_final},
                         {"mass_initial", r.mass_initial},
                         {"mass_final", r.mass_final},
                         {"wall_seconds", r.wall_seconds},
                         {"warnings", r.warnings},
                         {"extra", r.extra}});
  }
  return {{"provenance", provenance}, {"config", vsap::to_json(config)}, {"runs", runs_json},
          {"wall_seconds", wall_seconds}};
}

Manifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const fs::path root = fs::path(config.output_dir) / preset_name(config.preset);
  fs::create_directories(root);

  const PhaseGrid grid = make_grid(config.grid);
  ModelParams kernel_params = config.model;
  kernel_params.eps = config.eps_list.front();
  const KernelTables tables = build_tables(grid, kernel_params);

  std::vector<std::future<ExperimentRun>> jobs;
  for (double eps : config.eps_list) {
    jobs.push_back(std::async(std::launch::async, [&, eps] { return run_rescaled_member(config, grid, tables, eps, root); }));
  }
  if (config.with_reference) {
    for (double eps : config.eps_list) {
      jobs.push_back(std::async(std::launch::async, [&, eps] { return run_direct_member(config, tables, eps, root); }));
    }
  }
  if (config.with_limit) {
    jobs.push_back(std::async(std::launch::async, [&] { return run_limit_member(config, grid, tables, root); }));
  }
  if (config.with_stationary) {
    jobs.push_back(std::async(std::launch::async, [&] { return run_stationary_member(config, grid, tables, root); }));
  }

  Manifest manifest;
  manifest.config = config;
  manifest.provenance = provenance_string();
  for (auto& job : jobs) manifest.runs.push_back(job.get());
  manifest.wall_seconds = seconds_since(start);
  manifest.path = (root / "manifest.json").string();
  std::ofstream out(manifest.path);
  if (!out) throw std::runtime_error("cannot write manifest '" + manifest.path + "'");
  out << manifest.to_json().dump(2) << '\n';
  return manifest;
}

}  // namespace vsap
