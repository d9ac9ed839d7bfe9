// Command-line driver: runs presets, compares snapshots, lists presets.

#include "vsap/errors.hpp"
#include "vsap/experiments.hpp"
#include "vsap/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

vsap::DtRule parse_dt_rule(const std::string& text) {
  if (text == "paper") return vsap::DtRule::standard();
  if (text == "safe") return vsap::DtRule::safe();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    double value = 0.0;
    try {
      value = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad --dt-rule value '" + text + "'");
    }
    if (head == "fixed") return vsap::DtRule::fixed(value);
    if (head == "safe") return vsap::DtRule::safe(value);
  }
  throw std::invalid_argument("unknown --dt-rule '" + text + "' (paper|safe|fixed:<dt>)");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + item + "' in list");
    }
  }
  return out;
}

vsap::Norm parse_norm(const std::string& text) {
  if (text == "l1") return vsap::Norm::L1;
  if (text == "linf") return vsap::Norm::Linf;
  throw std::invalid_argument("unknown norm '" + text + "' (l1|linf)");
}

int fail(const std::string& kind, const std::string& message) {
  std::string flat = message;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::cerr << "error: kind=" << kind << " message=" << flat << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"velocity-scaling asymptotic-preserving kinetic solver"};
  app.require_subcommand(1);

  const char* env_out = std::getenv("VSAP_OUTPUT_DIR");
  std::string preset, eps_text, out_dir = env_out ? env_out : "out", dt_rule = "paper", snapshots_text;
  std::string model_name, potential_name, influence_name;
  int nx = 0, nxi = 0, nv = 0;
  double t_final = -1.0, cg_tol = 0.0, xi_max = 0.0;
  std::uint64_t seed = 0;
  bool no_reference = false, reference_upwind = false, no_limit = false, clip = false;

  auto* run = app.add_subcommand("run", "run a preset and write outputs");
  run->add_option("--preset", preset, "preset name (see `presets`)")->required();
  run->add_option("--eps", eps_text, "eps value or comma-separated list");
  run->add_option("--nx", nx, "spatial cells");
  run->add_option("--nxi", nxi, "rescaled velocity cells");
  run->add_option("--nv", nv, "direct-solver velocity cells");
  run->add_option("--xi-max", xi_max, "half-width of the xi domain");
  run->add_option("--tfinal", t_final, "final time");
  run->add_option("--out", out_dir, "output directory (default $VSAP_OUTPUT_DIR or ./out)");
  run->add_option("--cg-tol", cg_tol, "CG relative tolerance");
  run->add_option("--dt-rule", dt_rule, "paper | safe | safe:<cfl> | fixed:<dt>");
  run->add_option("--snapshots", snapshots_text, "comma-separated snapshot times (\"none\" for none)");
  run->add_option("--model", model_name, "aggregation | threezone");
  run->add_option("--potential", potential_name, "morse | morse-rescaled | none");
  run->add_option("--influence", influence_name, "inverse-sqrt");
  run->add_option("--seed", seed, "seed for the custom preset perturbation");
  run->add_flag("--no-reference", no_reference, "skip the direct kinetic solver");
  run->add_flag("--reference-upwind", reference_upwind, "first-order v-fluxes in the direct solver");
  run->add_flag("--no-limit", no_limit, "skip limiting-system runs");
  run->add_flag("--clip", clip, "clip negative g after each step");

  std::string path_a, path_b, norm_text = "l1", field = "rho";
  bool relative = false;
  auto* compare = app.add_subcommand("compare", "relative difference between two snapshots");
  compare->add_option("--a", path_a, "first snapshot")->required();
  compare->add_option("--b", path_b, "second snapshot")->required();
  compare->add_option("--norm", norm_text, "l1 | linf");
  compare->add_option("--field", field, "column of macro snapshots to compare");
  compare->add_flag("--relative", relative, "divide by the norm of the --b field");

  auto* presets = app.add_subcommand("presets", "list presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*presets) {
      for (const auto& p : vsap::list_presets()) std::cout << p.name << '\t' << p.description << '\n';
      return 0;
    }
    if (*compare) {
      const auto a = vsap::io::read_snapshot(path_a);
      const auto b = vsap::io::read_snapshot(path_b);
      const vsap::Norm norm = parse_norm(norm_text);
      double value = vsap::io::compare_snapshots(a, b, norm, field);
      if (relative) value /= vsap::io::snapshot_norm(b, norm, field);
      std::cout << vsap::io::format_double(value) << '\n';
      return 0;
    }

    const vsap::Preset p = vsap::preset_by_name(preset);
    vsap::ExperimentConfig config = vsap::build_preset(p);
    if (!eps_text.empty()) config.eps_list = parse_list(eps_text);
    if (nx > 0) config.grid.n_x = nx;
    if (nxi > 0) config.grid.n_xi = nxi;
    if (nv > 0) config.reference_n_v = nv;
    if (xi_max > 0.0) config.grid.xi_max = xi_max;
    if (t_final >= 0.0) {
      config.t_final = t_final;
      if (snapshots_text.empty()) config.snapshot_times = {0.0, t_final};
    } else if (p == vsap::Preset::HomogeneousExactness) {
      config.t_final = 1000.0 * (2.0 * vsap::kPi / config.grid.n_x) / 20.0;
      config.snapshot_times = {config.t_final};
    }
    if (!snapshots_text.empty())
      config.snapshot_times = snapshots_text == "none" ? std::vector<double>{} : parse_list(snapshots_text);
    if (cg_tol > 0.0) config.solver.cg_rel_tol = cg_tol;
    config.solver.dt_rule = parse_dt_rule(dt_rule);
    config.solver.positivity_clip = clip;
    if (!model_name.empty()) {
      config.model.model = vsap::model_by_name(model_name);
      if (config.model.model == vsap::Model::ThreeZone && !config.model.influence)
        config.model.influence = vsap::InfluenceSpec{};
    }
    if (!potential_name.empty()) config.model.potential = vsap::potential_by_name(potential_name);
    if (!influence_name.empty()) config.model.influence = vsap::influence_by_name(influence_name);
    if (config.model.model == vsap::Model::Aggregation) config.model.influence.reset();
    if (no_reference) config.with_reference = false;
    if (reference_upwind) config.reference_limited = false;
    if (no_limit) config.with_limit = config.with_stationary = false;
    config.seed = seed;
    config.output_dir = out_dir;

    const vsap::Manifest manifest = vsap::run_experiment(config);
    for (const auto& r : manifest.runs) {
      std::cout << r.solver << " eps=" << vsap::io::format_double(r.eps) << " steps=" << r.steps
                << " t=" << vsap::io::format_double(r.t_final) << " mass_drift="
                << vsap::io::format_double(r.mass_initial > 0 ? (r.mass_final - r.mass_initial) / r.mass_initial : 0.0)
                << '\n';
      for (const auto& w : r.warnings) std::cerr << "warning: " << r.solver << ": " << w << '\n';
    }
    std::cout << "manifest " << manifest.path << '\n';
    return 0;
  } catch (const vsap::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::invalid_argument& e) {
    return fail("invalid-argument", e.what());
  } catch (const std::exception& e) {
    return fail("io", e.what());
  }
}
