#include "report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace pmflow::cli {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

} // namespace

std::string render_iteration_table(const std::vector<TableColumn>& columns) {
  const std::vector<std::string> row_names = {
      "Nonlinear iterations", "Iterations per time step", "Pressure iterations",
      "Transport iterations"};

  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> cells(row_names.size());
  for (const TableColumn& col : columns) {
    std::string head = col.solver + "/" + col.tolerance;
    if (col.dt_days > 0.0) head += "/" + format_short(col.dt_days) + "d";
    headers.push_back(head);

    const bool is_newton = col.solver == "newton";
    if (col.dnc) {
      for (auto& row : cells) row.push_back("d.n.c.");
    } else {
      cells[0].push_back(std::to_string(col.outer));
      cells[1].push_back(
          format_short(col.steps > 0 ? static_cast<double>(col.outer) / col.steps : 0.0));
      cells[2].push_back(is_newton ? "-" : std::to_string(col.pressure));
      cells[3].push_back(is_newton ? "-" : std::to_string(col.transport));
    }
  }

  size_t name_width = 0;
  for (const std::string& n : row_names) name_width = std::max(name_width, n.size());
  std::vector<size_t> widths(columns.size());
  for (size_t c = 0; c < columns.size(); ++c) {
    widths[c] = headers[c].size();
    for (const auto& row : cells) widths[c] = std::max(widths[c], row[c].size());
  }

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "Solver";
  for (size_t c = 0; c < columns.size(); ++c)
    out << "  " << std::setw(static_cast<int>(widths[c])) << headers[c];
  out << "\n";
  for (size_t r = 0; r < row_names.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(name_width)) << row_names[r];
    for (size_t c = 0; c < columns.size(); ++c)
      out << "  " << std::setw(static_cast<int>(widths[c])) << cells[r][c];
    out << "\n";
  }
  return out.str();
}

std::string render_iteration_csv(const std::vector<TableColumn>& columns) {
  std::ostringstream out;
  out << "solver,tolerance,dt_days,status,steps,nonlinear_iterations,"
         "iterations_per_step,pressure_iterations,transport_iterations,max_cfl\n";
  for (const TableColumn& col : columns) {
    out << col.solver << ',' << col.tolerance << ',' << format_full(col.dt_days)
        << ',' << (col.dnc ? "d.n.c." : "converged") << ',' << col.steps << ','
        << col.outer << ','
        << format_full(col.steps > 0 ? static_cast<double>(col.outer) / col.steps : 0.0)
        << ',';
    if (col.solver == "newton")
      out << "-,-";
    else
      out << col.pressure << ',' << col.transport;
    out << ',' << format_full(col.max_cfl) << "\n";
  }
  return out.str();
}

void emit_fields(std::ostream& out, double time_days, int nx, int nz,
                 const std::vector<double>& values) {
  out << format_full(time_days) << ' ' << nx << ' ' << nz << '\n';
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (i > 0) out << ' ';
      out << format_full(values[static_cast<size_t>(i) + static_cast<size_t>(nx) * j]);
    }
    out << '\n';
  }
}

void emit_convergence_history(std::ostream& out, int step_index,
                              const std::vector<double>& history) {
  for (size_t k = 0; k < history.size(); ++k)
    out << step_index << ',' << k << ',' << format_full(history[k]) << '\n';
}

} // namespace pmflow::cli
