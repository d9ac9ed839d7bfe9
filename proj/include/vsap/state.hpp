#pragma once

#include "vsap/phase_space.hpp"

namespace vsap {

/// Solution triple (g, u, omega) of the rescaled system together with the
/// moments the scheme carries between steps.
struct RescaledState {
  PhaseField g;
  ScalarField rho;       ///< moment_0(g)
  ScalarField m;         ///< momentum rho u
  ScalarField u;         ///< m / max(rho, floor)
  ScalarField omega;     ///< scaling factor, > 0
  ScalarField pressure;  ///< moment_2_centered(g)
  double t = 0.0;
  long n = 0;
  int cg_iterations = 0;  ///< iterations of the last momentum solve
};

/// Builds a consistent state from (g, u, omega) at time t.
RescaledState make_state(const PhaseGrid& grid, PhaseField g, const ScalarField& u, ScalarField omega,
                         double t = 0.0);

struct DtRule {
  enum class Kind { Fixed, Standard, Safe };
  Kind kind = Kind::Standard;
  double value = 0.0;  ///< dt for Fixed, CFL number for Safe

  static DtRule standard() { return {Kind::Standard, 0.0}; }
  static DtRule fixed(double dt) { return {Kind::Fixed, dt}; }
  static DtRule safe(double cfl = 0.9) { return {Kind::Safe, cfl}; }
};

struct SolverConfig {
  DtRule dt_rule = DtRule::standard();
  double cg_rel_tol = 1e-10;
  int cg_max_iter = 0;  ///< 0: 10 n_x
  bool positivity_clip = false;
};

}  // namespace vsap
