#pragma once

#include <stdexcept>
#include <string>

namespace vsap {

/// Base class for solver-level failures. `kind()` is the stable tag printed
/// by the command line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// A field violates a precondition of the operation (e.g. omega <= 0).
class InvalidState : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-state"; }
};

/// User-supplied data is inadmissible (e.g. negative initial density).
class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-input"; }
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", relative residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  const char* kind() const noexcept override { return "solver-failure"; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Raised under the safe CFL rule when the proposed step is too large.
class StepRejected : public Error {
 public:
  StepRejected(double dt, double admissible)
      : Error("time step " + std::to_string(dt) + " exceeds admissible " +
              std::to_string(admissible)),
        admissible_dt_(admissible) {}
  const char* kind() const noexcept override { return "step-rejected"; }
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& solver, long step)
      : Error(solver + " produced a non-finite value at step " + std::to_string(step)),
        step_(step) {}
  const char* kind() const noexcept override { return "simulation-diverged"; }
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace vsap
