#pragma once

#include <functional>
#include <vector>

#include "core/solvers.hpp"

namespace pmflow {

/// Constant-base-step schedule with a halving restart policy.
struct Schedule {
  double t_max = 0.0;  // s
  double dt = 0.0;     // s, base step
  int max_retries = 4; // consecutive halvings before the run aborts
};

void validate_schedule(const Schedule& schedule);

/// Per-cell, per-phase CFL numbers: dt * (outflow mass flux) / (V phi rho),
/// the dimensionless pore-volume throughput of the step.
struct CflNumbers {
  std::vector<double> wetting;
  std::vector<double> non_wetting;
  double max = 0.0;
};
CflNumbers cfl_numbers(const Grid& grid, const RockProps& rock,
                       const FluidProps& fluid, const std::vector<double>& flux_w,
                       const std::vector<double>& flux_nw, double dt);

/// One accepted time step.
struct StepRecord {
  double t_start = 0.0;
  double dt = 0.0;
  int restarts = 0; // failed attempts before this step was accepted
  double max_cfl = 0.0;
  SolverReport report;
};

/// Saved field snapshot.
struct Snapshot {
  double time = 0.0; // s
  State state;
};

/// Aggregated outcome of a schedule run. Headline iteration totals cover
/// accepted steps only; iterations burned in failed attempts are logged
/// separately.
struct RunSummary {
  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;
  long long outer_total = 0;
  long long pressure_total = 0;
  long long transport_total = 0;
  long long failed_outer = 0;
  long long failed_pressure = 0;
  long long failed_transport = 0;
  int restart_count = 0;
  double max_cfl = 0.0;
  double t_end = 0.0;
  bool completed = false; // reached t_max
  bool dnc = false;       // aborted on non-convergence
  double injected_volume = 0.0;         // m^3
  double produced_volume = 0.0;         // m^3, total fluid
  double produced_wetting_volume = 0.0; // m^3
  double pore_volume = 0.0;             // m^3
  double volume_balance_error = 0.0; // relative, welled runs only
  State final_state;

  double iterations_per_step() const {
    return steps.empty() ? 0.0 : static_cast<double>(outer_total) / steps.size();
  }
  double pvi() const { return pore_volume > 0.0 ? injected_volume / pore_volume : 0.0; }
};

/// Advances one time step attempt from `prev` over dt.
using TimeStepper =
    std::function<SolverReport(const State& prev, double dt, State& next)>;

/// Marches `stepper` over the schedule: a failed step is restarted from the
/// previous converged state with dt halved (up to max_retries consecutive
/// times); after a success the loop returns to the base dt. The final step is
/// truncated so the accepted steps sum exactly to t_max.
RunSummary march_schedule(const Assembler& assembler, FluxScheme cfl_scheme,
                          const Schedule& schedule, const State& initial,
                          const TimeStepper& stepper,
                          const std::vector<double>& snapshot_times = {});

/// Full run with one of the built-in solvers.
RunSummary run_simulation(const Assembler& assembler, SolverKind solver,
                          const ToleranceStrategy& strategy,
                          const SolverControls& controls, const Schedule& schedule,
                          const State& initial,
                          const std::vector<double>& snapshot_times = {});

/// Scales dt until the run's maximum CFL number lands within rel_tol of
/// `target` (at most `max_probes` full runs).
double find_dt_for_max_cfl(const Assembler& assembler, SolverKind solver,
                           const ToleranceStrategy& strategy,
                           const SolverControls& controls, Schedule schedule,
                           const State& initial, double target,
                           double rel_tol = 0.05, int max_probes = 6);

} // namespace pmflow
