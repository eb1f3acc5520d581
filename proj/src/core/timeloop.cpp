#include "core/timeloop.hpp"

#include <algorithm>
#include <cmath>

namespace pmflow {

void validate_schedule(const Schedule& schedule) {
  if (!(schedule.dt > 0.0)) throw ConfigError("schedule: dt must be positive");
  if (schedule.t_max < schedule.dt)
    throw ConfigError("schedule: t_max must be at least one step");
  if (schedule.max_retries < 0) throw ConfigError("schedule: negative retry count");
}

CflNumbers cfl_numbers(const Grid& grid, const RockProps& rock,
                       const FluidProps& fluid, const std::vector<double>& flux_w,
                       const std::vector<double>& flux_nw, double dt) {
  const int m = grid.num_cells();
  CflNumbers out;
  out.wetting.assign(m, 0.0);
  out.non_wetting.assign(m, 0.0);
  for (size_t f = 0; f < grid.interfaces.size(); ++f) {
    const Interface& iface = grid.interfaces[f];
    // F > 0 is outflow from k; -F > 0 is outflow from l.
    out.wetting[iface.k] += std::max(0.0, flux_w[f]);
    out.wetting[iface.l] += std::max(0.0, -flux_w[f]);
    out.non_wetting[iface.k] += std::max(0.0, flux_nw[f]);
    out.non_wetting[iface.l] += std::max(0.0, -flux_nw[f]);
  }
  for (int c = 0; c < m; ++c) {
    const double vphi = grid.cell_volume * rock.porosity[c];
    out.wetting[c] *= dt / (vphi * fluid.rho_w);
    out.non_wetting[c] *= dt / (vphi * fluid.rho_nw);
    out.max = std::max({out.max, out.wetting[c], out.non_wetting[c]});
  }
  return out;
}

RunSummary march_schedule(const Assembler& assembler, FluxScheme cfl_scheme,
                          const Schedule& schedule, const State& initial,
                          const TimeStepper& stepper,
                          const std::vector<double>& snapshot_times) {
  validate_schedule(schedule);
  RunSummary summary;
  const Grid& grid = assembler.grid();
  for (int c = 0; c < grid.num_cells(); ++c)
    summary.pore_volume += assembler.pore_volume(c);

  std::vector<double> snap_times = snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  size_t next_snap = 0;

  State state = initial;
  State next;
  std::vector<double> fw, fnw;
  double t = 0.0;
  double total_rate_in = 0.0, total_rate_out = 0.0;
  for (const Injector& w : assembler.wells().injectors) total_rate_in += w.rate;
  for (const Producer& w : assembler.wells().producers) total_rate_out += w.rate;

  while (t < schedule.t_max - 1e-9 * schedule.t_max) {
    const double base_dt = std::min(schedule.dt, schedule.t_max - t);
    double dt = base_dt;
    int restarts = 0;
    SolverReport report;
    for (;;) {
      report = stepper(state, dt, next);
      if (report.converged) break;
      summary.failed_outer += report.outer_iterations;
      summary.failed_pressure += report.pressure_iterations;
      summary.failed_transport += report.transport_iterations;
      if (restarts >= schedule.max_retries) {
        summary.dnc = true;
        summary.t_end = t;
        summary.final_state = state;
        return summary;
      }
      ++restarts;
      ++summary.restart_count;
      dt *= 0.5;
    }

    t += dt;
    state = std::move(next);

    StepRecord rec;
    rec.t_start = t - dt;
    rec.dt = dt;
    rec.restarts = restarts;
    rec.report = std::move(report);
    assembler.phase_fluxes(state, cfl_scheme, fw, fnw);
    rec.max_cfl = cfl_numbers(grid, assembler.rock(), assembler.fluid(), fw, fnw, dt).max;
    summary.max_cfl = std::max(summary.max_cfl, rec.max_cfl);
    summary.outer_total += rec.report.outer_iterations;
    summary.pressure_total += rec.report.pressure_iterations;
    summary.transport_total += rec.report.transport_iterations;
    summary.steps.push_back(std::move(rec));

    summary.injected_volume += total_rate_in * dt;
    summary.produced_volume += total_rate_out * dt;
    // Wetting volume leaving through producers, split by the converged
    // end-of-step fractional flow (the same split the residual used).
    for (const Producer& w : assembler.wells().producers) {
      const MobilityEval mob = mobilities(state.s[w.cell], assembler.fluid());
      summary.produced_wetting_volume += mob.lambda_w / mob.total() * w.rate * dt;
    }

    while (next_snap < snap_times.size() && t >= snap_times[next_snap] - 1e-9) {
      summary.snapshots.push_back({t, state});
      ++next_snap;
    }
  }

  summary.completed = true;
  summary.t_end = t;
  summary.final_state = state;

  // Incompressible volume balance for the wetting phase: injected minus
  // produced wetting volume equals the change of wetting volume in place.
  if (!assembler.wells().injectors.empty() || !assembler.wells().producers.empty()) {
    double dsw_volume = 0.0;
    for (int c = 0; c < grid.num_cells(); ++c)
      dsw_volume += assembler.pore_volume(c) * (state.s[c] - initial.s[c]);
    const double denom = std::max(summary.injected_volume, 1e-300);
    summary.volume_balance_error =
        std::abs(summary.injected_volume - summary.produced_wetting_volume -
                 dsw_volume) /
        denom;
  }
  return summary;
}

RunSummary run_simulation(const Assembler& assembler, SolverKind solver,
                          const ToleranceStrategy& strategy,
                          const SolverControls& controls, const Schedule& schedule,
                          const State& initial,
                          const std::vector<double>& snapshot_times) {
  const TimeStepSolver step_solver(assembler, controls);
  const TimeStepper stepper = [&, solver](const State& prev, double dt, State& next) {
    return step_solver.solve(solver, strategy, prev, dt, next);
  };
  return march_schedule(assembler, scheme_of(solver), schedule, initial, stepper,
                        snapshot_times);
}

double find_dt_for_max_cfl(const Assembler& assembler, SolverKind solver,
                           const ToleranceStrategy& strategy,
                           const SolverControls& controls, Schedule schedule,
                           const State& initial, double target, double rel_tol,
                           int max_probes) {
  if (!(target > 0.0)) throw ConfigError("target CFL must be positive");
  for (int probe = 0; probe < max_probes; ++probe) {
    const RunSummary summary = run_simulation(assembler, solver, strategy, controls,
                                              schedule, initial);
    if (summary.dnc || summary.max_cfl <= 0.0)
      throw ConfigError("CFL-matched schedule search failed: run did not complete");
    if (std::abs(summary.max_cfl - target) / target <= rel_tol) return schedule.dt;
    schedule.dt *= target / summary.max_cfl;
    schedule.dt = std::min(schedule.dt, schedule.t_max);
  }
  return schedule.dt;
}

} // namespace pmflow
