#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pmflow::cli {

/// One column of the iteration table (one executed run).
struct TableColumn {
  std::string solver;
  std::string tolerance;
  double dt_days = 0.0;
  bool dnc = false;
  long long outer = 0;
  long long pressure = 0;
  long long transport = 0;
  int steps = 0;
  double max_cfl = 0.0;
};

/// Full-precision scientific formatting shared by all emitters so repeated
/// runs produce byte-identical files.
std::string format_full(double v);

/// Plain-text iteration table: one column per run, rows for nonlinear /
/// per-step / pressure / transport iterations. Newton shows "-" in the
/// subproblem rows; non-converged runs show "d.n.c.".
std::string render_iteration_table(const std::vector<TableColumn>& columns);

/// Machine-readable form of the same table.
std::string render_iteration_csv(const std::vector<TableColumn>& columns);

/// Row-major cell field with a "time_days nx nz" header line.
void emit_fields(std::ostream& out, double time_days, int nx, int nz,
                 const std::vector<double>& values);

/// Residual history of one step: rows "step,iter,norm", including the initial
/// norm at iter 0.
void emit_convergence_history(std::ostream& out, int step_index,
                              const std::vector<double>& history);

} // namespace pmflow::cli
