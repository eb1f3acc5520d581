#include "runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pmflow.h"
#include "report.hpp"

namespace pmflow::cli {

namespace fs = std::filesystem;

namespace {

pmf_solver solver_enum(const std::string& name) {
  if (name == "newton") return PMF_SOLVER_NEWTON;
  if (name == "sfi_ut") return PMF_SOLVER_SFI_UT;
  if (name == "fsmsn_p") return PMF_SOLVER_FSMSN_P;
  if (name == "fsmsn_ut") return PMF_SOLVER_FSMSN_UT;
  if (name == "mspin_p") return PMF_SOLVER_MSPIN_P;
  throw ParseError("unknown solver '" + name + "'");
}

pmf_tolerance tolerance_enum(const std::string& name) {
  if (name == "fixed") return PMF_TOLERANCE_FIXED;
  if (name == "a1") return PMF_TOLERANCE_A1;
  if (name == "a2") return PMF_TOLERANCE_A2;
  if (name == "a3") return PMF_TOLERANCE_A3;
  throw ParseError("unknown tolerance strategy '" + name + "'");
}

struct ScenarioHandle {
  pmf_scenario* ptr = nullptr;
  ~ScenarioHandle() { pmf_scenario_destroy(ptr); }
};

struct RunHandle {
  pmf_run* ptr = nullptr;
  ~RunHandle() { pmf_run_destroy(ptr); }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

} // namespace

std::string resolve_output_dir(const std::string& configured) {
  const char* root = std::getenv("PMFLOW_OUTPUT_ROOT");
  if (root != nullptr && root[0] != '\0')
    return (fs::path(root) / configured).string();
  return configured;
}

int list_scenarios(std::ostream& out) {
  for (int i = 0; i < pmf_scenario_count(); ++i)
    out << pmf_scenario_name_at(i) << "\n";
  return 0;
}

int execute_config(const RunConfig& config, bool sweep, std::ostream& log) {
  const std::vector<RunEntry> entries =
      sweep ? config.expand_sweep() : config.runs;
  if (entries.empty()) {
    log << "error: no runs configured (" << (sweep ? "missing 'solvers' list" : "missing [run] sections")
        << ")\n";
    return 1;
  }

  ScenarioHandle scenario;
  if (pmf_scenario_create(config.scenario.c_str(), &scenario.ptr) != PMF_OK) {
    log << "error: " << pmf_error_message() << "\n";
    return 1;
  }
  for (const auto& [key, value] : config.overrides) {
    if (pmf_scenario_set(scenario.ptr, key.c_str(), value.c_str()) != PMF_OK) {
      log << "error: " << pmf_error_message() << "\n";
      return 1;
    }
  }

  int nx = 0, nz = 0;
  pmf_scenario_dims(scenario.ptr, &nx, &nz);
  const fs::path out_dir = resolve_output_dir(config.output);
  fs::create_directories(out_dir);

  std::vector<TableColumn> table;
  bool any_dnc = false;
  int run_index = 0;
  for (const RunEntry& entry : entries) {
    pmf_run_options opt;
    pmf_run_options_init(&opt);
    opt.solver = solver_enum(entry.solver);
    opt.tolerance = tolerance_enum(entry.tolerance);
    opt.fixed_subproblem_tol = config.subproblem_tol;
    opt.outer_tol = config.outer_tol;
    opt.dt_seconds = entry.dt_seconds;
    opt.max_outer = config.max_outer;
    opt.max_inner = config.max_inner;
    opt.max_retries = config.max_retries;
    opt.snapshot_times = config.snapshot_times.empty() ? nullptr : config.snapshot_times.data();
    opt.snapshot_count = static_cast<int>(config.snapshot_times.size());

    const double dt_days =
        (entry.dt_seconds > 0.0 ? entry.dt_seconds
                                : pmf_scenario_default_dt(scenario.ptr)) /
        86400.0;
    log << "run " << run_index << ": " << entry.solver << " / " << entry.tolerance
        << " / dt " << dt_days << " d ... " << std::flush;

    RunHandle run;
    if (pmf_run_simulation(scenario.ptr, &opt, &run.ptr) != PMF_OK) {
      log << "error: " << pmf_error_message() << "\n";
      return 1;
    }

    TableColumn col;
    col.solver = entry.solver;
    col.tolerance = entry.tolerance;
    col.dt_days = dt_days;
    col.dnc = pmf_run_converged(run.ptr) == 0;
    col.outer = pmf_run_outer_iterations(run.ptr);
    col.pressure = pmf_run_pressure_iterations(run.ptr);
    col.transport = pmf_run_transport_iterations(run.ptr);
    col.steps = pmf_run_step_count(run.ptr);
    col.max_cfl = pmf_run_max_cfl(run.ptr);
    table.push_back(col);
    any_dnc = any_dnc || col.dnc;
    log << (col.dnc ? "d.n.c." : "converged") << " (" << col.outer << " outer)\n";

    // Per-run artifacts.
    char dirname[128];
    std::snprintf(dirname, sizeof(dirname), "run%03d_%s_%s", run_index,
                  entry.solver.c_str(), entry.tolerance.c_str());
    const fs::path run_dir = out_dir / dirname;
    fs::create_directories(run_dir);

    {
      std::ofstream hist(run_dir / "histories.csv");
      hist << "step,iter,normalized_residual\n";
      const int steps = pmf_run_step_count(run.ptr);
      std::vector<double> buf;
      for (int s = 0; s < steps; ++s) {
        const int n = pmf_run_history(run.ptr, s, nullptr, 0);
        buf.resize(static_cast<size_t>(n));
        pmf_run_history(run.ptr, s, buf.data(), n);
        emit_convergence_history(hist, s, buf);
      }
    }

    const int snaps = pmf_run_snapshot_count(run.ptr);
    std::vector<double> pressure(static_cast<size_t>(nx) * nz);
    std::vector<double> saturation(static_cast<size_t>(nx) * nz);
    for (int i = 0; i < snaps; ++i) {
      double t = 0.0;
      pmf_run_snapshot_time(run.ptr, i, &t);
      if (pmf_run_snapshot_fields(run.ptr, i, pressure.data(), saturation.data(),
                                  nx * nz) != PMF_OK) {
        log << "error: " << pmf_error_message() << "\n";
        return 1;
      }
      const double t_days = t / 86400.0;
      char tag[64];
      std::snprintf(tag, sizeof(tag), "t%.6g", t_days);
      std::ofstream sat(run_dir / (std::string("saturation_") + tag + ".csv"));
      emit_fields(sat, t_days, nx, nz, saturation);
      std::ofstream prs(run_dir / (std::string("pressure_") + tag + ".csv"));
      emit_fields(prs, t_days, nx, nz, pressure);
    }
    ++run_index;
  }

  write_file(out_dir / "iteration_table.txt", render_iteration_table(table));
  write_file(out_dir / "iteration_table.csv", render_iteration_csv(table));
  log << "wrote " << (out_dir / "iteration_table.txt").string() << "\n";
  return any_dnc ? 2 : 0;
}

} // namespace pmflow::cli
