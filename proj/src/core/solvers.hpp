#pragma once

#include <vector>

#include "core/assembly.hpp"
#include "core/norms.hpp"
#include "core/tolerance.hpp"

namespace pmflow {

/// Solution strategies compared by the benchmark harness. The upwinding scheme
/// is tied to the strategy: Newton, FSMSN-p and MSPIN-p discretize with PPU,
/// SFI-uT and FSMSN-uT with IHU.
enum class SolverKind { Newton, SfiUt, FsmsnP, FsmsnUt, MspinP };

FluxScheme scheme_of(SolverKind kind);
const char* solver_name(SolverKind kind);

struct SolverControls {
  double outer_tol = 1e-8;
  int max_outer = 200;
  int max_inner = 50;
};

/// Outcome of one time step solve.
struct SolverReport {
  int outer_iterations = 0;
  long pressure_iterations = 0;
  long transport_iterations = 0;
  std::vector<double> residual_history; // one entry per outer iteration + initial
  bool converged = false;
  double max_applied_ds = 0.0; // largest damped saturation change of any update
};

/// Saturation damping: a single scalar limiting the largest saturation change
/// of an update to 0.2; the pressure update is never damped.
double damping_factor(const std::vector<double>& delta_s);

/// One-time-step nonlinear solver bound to a spatial problem description.
class TimeStepSolver {
public:
  TimeStepSolver(const Assembler& assembler, SolverControls controls)
      : asm_(&assembler), norms_(assembler), controls_(controls) {}

  /// Advances prev -> next over dt with the requested strategy.
  SolverReport solve(SolverKind kind, ToleranceStrategy strategy, const State& prev,
                     double dt, State& next) const;

  SolverReport newton_fim(const State& prev, double dt, State& next) const;
  SolverReport sfi_ut(ToleranceStrategy strategy, const State& prev, double dt,
                      State& next) const;
  SolverReport fsmsn(bool fixed_ut_variant, ToleranceStrategy strategy,
                     const State& prev, double dt, State& next) const;
  SolverReport mspin(ToleranceStrategy strategy, const State& prev, double dt,
                     State& next) const;

  /// Newton loop on the pressure subproblem g(p, s fixed) = 0. The linear
  /// solves use the density-weighted (volumetric) combination of the rows,
  /// which stays consistent for an incompressible closed system, with the
  /// pressure-level nullspace anchored in cell 0. Exits when the phase-sum
  /// norm meets eps_p or when the volumetric residual is converged (the
  /// subproblem cannot improve the phase-sum norm further). Returns the
  /// iteration count, or -1 on failure.
  int inner_pressure_solve(FluxScheme scheme, const State& prev, double dt,
                           double eps_p, State& x, SplitSystem& work) const;

  /// Damped Newton loop on the transport subproblem h = 0 at fixed pressure
  /// (PPU) or frozen total velocity (IHU). Returns the iteration count, or -1
  /// on failure. When max_ds is given it accumulates the largest damped
  /// saturation change applied.
  int inner_transport_solve(TransportVariant variant, const State& prev, double dt,
                            double eps_s, const std::vector<double>* frozen_ut,
                            State& x, SplitSystem& work,
                            double* max_ds = nullptr) const;

  const ConvergenceNorms& norms() const { return norms_; }
  const Assembler& assembler() const { return *asm_; }

private:
  struct OuterLinearization; // A3 bookkeeping

  /// Solves the coupled system J dx = -[g; h] (or = rhs when given) with the
  /// constant-pressure nullspace anchored. Returns false on solver failure.
  bool coupled_solve(const SplitSystem& sys, const std::vector<double>* rhs,
                     std::vector<double>& dp, std::vector<double>& ds) const;

  const Assembler* asm_;
  ConvergenceNorms norms_;
  SolverControls controls_;
};

} // namespace pmflow
