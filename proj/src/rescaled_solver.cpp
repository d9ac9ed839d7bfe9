#include "vsap/rescaled_solver.hpp"

#include "vsap/cg.hpp"
#include "vsap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace vsap {
namespace {

// Smallest omega used as a divisor; omega itself may underflow to zero for
// very stiff runs.
constexpr double kOmegaFloor = std::numeric_limits<double>::min();

struct TransportCoefficients {
  ScalarField grad_omega;
  ScalarField grad_u;
  ScalarField pressure_force;  // d_x(omega^2 P) / (rho omega)
};

TransportCoefficients transport_coefficients(const PhaseGrid& grid, const RescaledState& s) {
  TransportCoefficients c;
  c.grad_omega = gradient_x(grid, s.omega);
  c.grad_u = gradient_x(grid, s.u);
  const ScalarField stress = s.omega.square() * s.pressure;
  c.pressure_force = gradient_x(grid, stress) / (floored(s.rho) * s.omega.max(kOmegaFloor));
  return c;
}

double xi_speed(const TransportCoefficients& c, int i, double xi) {
  return xi * xi * c.grad_omega[i] + xi * c.grad_u[i] - c.pressure_force[i];
}

bool finite_state(const RescaledState& s) {
  return s.g.allFinite() && s.m.allFinite() && s.omega.allFinite() && s.rho.allFinite();
}

}  // namespace

RescaledState make_state(const PhaseGrid& grid, PhaseField g, const ScalarField& u, ScalarField omega,
                         double t) {
  if (g.rows() != grid.n_x || g.cols() != grid.n_xi || u.size() != grid.n_x || omega.size() != grid.n_x) {
    throw std::invalid_argument("make_state: field shapes do not match the grid");
  }
  RescaledState s;
  s.rho = moment_0(grid, g);
  s.pressure = moment_2_centered(grid, g);
  s.g = std::move(g);
  s.u = u;
  s.m = s.rho * u;
  s.omega = std::move(omega);
  s.t = t;
  return s;
}

PhaseField xi_coefficient(const PhaseGrid& grid, const RescaledState& state) {
  const TransportCoefficients c = transport_coefficients(grid, state);
  PhaseField a(grid.n_x, grid.n_xi);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_xi; ++j) a(i, j) = xi_speed(c, i, grid.xi_centers[j]);
  return a;
}

double admissible_dt(const PhaseGrid& grid, const RescaledState& state, double cfl) {
  const TransportCoefficients c = transport_coefficients(grid, state);
  double max_x = 0.0;
  double max_xi = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    const int ip = grid.wrap(i + 1);
    const double u_face = 0.5 * (state.u[i] + state.u[ip]);
    const double w_face = 0.5 * (state.omega[i] + state.omega[ip]);
    max_x = std::max(max_x, std::abs(u_face) + w_face * grid.xi_max());
    for (int j = 1; j < grid.n_xi; ++j) max_xi = std::max(max_xi, std::abs(xi_speed(c, i, grid.xi_face(j))));
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double dt_x = max_x > 0.0 ? grid.dx / max_x : inf;
  const double dt_xi = max_xi > 0.0 ? grid.dxi / max_xi : inf;
  return cfl * std::min(dt_x, dt_xi);
}

PhaseField explicit_g_step(const PhaseGrid& grid, const RescaledState& state, double dt,
                           std::optional<double> safe_cfl) {
  if (safe_cfl) {
    const double limit = admissible_dt(grid, state, *safe_cfl);
    if (dt > limit * (1.0 + 1e-12)) throw StepRejected(dt, limit);
  }
  const int nx = grid.n_x;
  const int nv = grid.n_xi;
  const PhaseField& g = state.g;

  // flux_x.row(i) lives on the face between cells i and i+1.
  PhaseField flux_x(nx, nv);
  for (int i = 0; i < nx; ++i) {
    const int ip = grid.wrap(i + 1);
    const double u_face = 0.5 * (state.u[i] + state.u[ip]);
    const double w_face = 0.5 * (state.omega[i] + state.omega[ip]);
    for (int j = 0; j < nv; ++j) {
      flux_x(i, j) = upwind_flux(u_face + w_face * grid.xi_centers[j], g(i, j), g(ip, j));
    }
  }

  // flux_xi.col(j) lives on the face between cells j-1 and j; the two
  // boundary faces carry no flux.
  const TransportCoefficients c = transport_coefficients(grid, state);
  PhaseField flux_xi = PhaseField::Zero(nx, nv + 1);
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < nv; ++j) {
      flux_xi(i, j) = upwind_flux(-xi_speed(c, i, grid.xi_face(j)), g(i, j - 1), g(i, j));
    }
  }

  const double lx = dt / grid.dx;
  const double lxi = dt / grid.dxi;
  PhaseField out(nx, nv);
  for (int i = 0; i < nx; ++i) {
    const int im = grid.wrap(i - 1);
    for (int j = 0; j < nv; ++j) {
      out(i, j) = g(i, j) - lx * (flux_x(i, j) - flux_x(im, j)) - lxi * (flux_xi(i, j + 1) - flux_xi(i, j));
    }
  }
  return out;
}

ScalarField momentum_rhs(const PhaseGrid& grid, const RescaledState& state, double dt) {
  const int nx = grid.n_x;
  ScalarField flux(nx);
  for (int i = 0; i < nx; ++i) {
    const int ip = grid.wrap(i + 1);
    flux[i] = upwind_flux(0.5 * (state.u[i] + state.u[ip]), state.m[i], state.m[ip]);
  }
  const ScalarField stress_grad = gradient_x(grid, ScalarField(state.omega.square() * state.pressure));
  ScalarField rhs(nx);
  for (int i = 0; i < nx; ++i) {
    rhs[i] = state.m[i] - dt * ((flux[i] - flux[grid.wrap(i - 1)]) / grid.dx + stress_grad[i]);
  }
  return rhs;
}

ScalarField alignment_operator(const KernelTables& tables, const ScalarField& rho, const ScalarField& m) {
  return conv_phi(tables, rho) * m - rho * conv_phi(tables, m);
}

MomentumSolve implicit_momentum_solve(const PhaseGrid& grid, const RescaledState& state,
                                      const ScalarField& rho_next, const KernelTables& tables,
                                      const ModelParams& params, double dt, const SolverConfig& config) {
  const double stiff = dt / params.eps;
  const ScalarField rhs = momentum_rhs(grid, state, dt) - stiff * rho_next * conv_gradK(tables, rho_next);

  MomentumSolve out;
  if (params.model == Model::Aggregation) {
    out.m = rhs / (1.0 + stiff);
    return out;
  }

  const ScalarField a_next = conv_phi(tables, rho_next);
  auto apply = [&](const ScalarField& m) -> ScalarField {
    return m + stiff * (a_next * m - rho_next * conv_phi(tables, m));
  };
  auto identity = [](ScalarField v) { return v; };
  const ScalarField weight = 1.0 / floored(rho_next);

  out.m = state.m;
  CgOptions options{config.cg_rel_tol, config.cg_max_iter};
  const CgReport report = weighted_cg<double>(apply, identity, rhs, weight, out.m, options);
  if (!report.converged) {
    throw SolverFailure("implicit momentum solve did not converge", report.iterations, report.rel_residual);
  }
  out.iterations = report.iterations;
  return out;
}

ScalarField implicit_omega_update(const PhaseGrid& grid, const ScalarField& omega, const ScalarField& u,
                                  const ScalarField& a_next, double dt, double eps) {
  ScalarField out(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) {
    const double slope = u[i] > 0.0 ? (omega[i] - omega[grid.wrap(i - 1)]) / grid.dx
                                    : (omega[grid.wrap(i + 1)] - omega[i]) / grid.dx;
    out[i] = (omega[i] - dt * u[i] * slope) / (1.0 + dt * a_next[i] / eps);
  }
  return out;
}

double select_dt(const PhaseGrid& grid, const RescaledState& state, const SolverConfig& config) {
  const double base = grid.dx / 20.0;
  switch (config.dt_rule.kind) {
    case DtRule::Kind::Fixed:
      if (!(config.dt_rule.value > 0.0)) throw std::invalid_argument("fixed time step must be positive");
      return config.dt_rule.value;
    case DtRule::Kind::Safe:
      return std::min(base, admissible_dt(grid, state, config.dt_rule.value));
    case DtRule::Kind::Standard:
      break;
  }
  return base;
}

RescaledState step(const PhaseGrid& grid, const RescaledState& state, const KernelTables& tables,
                   const ModelParams& params, const SolverConfig& config, double dt) {
  std::optional<double> safe;
  if (config.dt_rule.kind == DtRule::Kind::Safe) safe = config.dt_rule.value;

  RescaledState next;
  next.g = explicit_g_step(grid, state, dt, safe);
  if (config.positivity_clip) next.g = next.g.max(0.0);
  next.rho = moment_0(grid, next.g);
  MomentumSolve momentum = implicit_momentum_solve(grid, state, next.rho, tables, params, dt, config);
  next.m = std::move(momentum.m);
  next.cg_iterations = momentum.iterations;
  const ScalarField a_next = compute_A(params, tables, next.rho);
  next.omega = implicit_omega_update(grid, state.omega, state.u, a_next, dt, params.eps);
  next.u = next.m / floored(next.rho);
  next.pressure = moment_2_centered(grid, next.g);
  next.t = state.t + dt;
  next.n = state.n + 1;
  return next;
}

RunResult run(const PhaseGrid& grid, const RescaledState& initial, const KernelTables& tables,
              const ModelParams& params, const SolverConfig& config, const RunOptions& options) {
  if (options.t_final < initial.t) throw std::invalid_argument("run: t_final precedes the initial time");
  RunResult result;
  result.state = initial;
  RescaledState& state = result.state;

  std::vector<double> targets;
  for (double t : options.snapshot_times) {
    if (t >= initial.t && t <= options.t_final) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  auto target = targets.begin();
  auto emit = [&] {
    if (options.on_snapshot) options.on_snapshot(state);
  };
  while (target != targets.end() && *target == state.t) {
    emit();
    ++target;
  }
  if (options.t_final == initial.t) return result;

  const double lower_bound = alignment_lower_bound(params, integrate_x(grid, initial.rho));
  double omega_bound = 1.0;
  bool boundary_warned = false;
  const int stride = std::max(1, options.diag_stride);

  auto sample = [&] {
    DiagnosticsRecord rec = make_record(grid, state, omega_bound, options.support_threshold);
    if (!rec.finite()) throw SimulationDiverged("rescaled solver diagnostics", state.n);
    if (!boundary_warned && rec.boundary_mass_fraction > kBoundaryMassWarning) {
      char msg[96];
      std::snprintf(msg, sizeof(msg), "boundary mass fraction %.3e exceeds %.0e at t=%.6f", rec.boundary_mass_fraction,
                    kBoundaryMassWarning, rec.t);
      result.warnings.push_back(msg);
      boundary_warned = true;
    }
    result.series.push_back(rec);
  };
  sample();

  while (state.t < options.t_final) {
    const double goal = target != targets.end() ? *target : options.t_final;
    double dt = select_dt(grid, state, config);
    bool landing = false;
    if (state.t + dt >= goal - 1e-12 * std::max(1.0, std::abs(goal))) {
      dt = goal - state.t;
      landing = true;
    }
    state = step(grid, state, tables, params, config, dt);
    if (landing) state.t = goal;
    if (!finite_state(state)) throw SimulationDiverged("rescaled solver", state.n);
    omega_bound /= 1.0 + lower_bound * dt / params.eps;

    const bool done = state.t >= options.t_final;
    if (state.n % stride == 0 || done) sample();
    while (target != targets.end() && *target <= state.t) {
      emit();
      ++target;
    }
  }
  return result;
}

}  // namespace vsap
