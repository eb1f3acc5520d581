#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pmflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double to_number(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ParseError("invalid number '" + s + "'");
  return v;
}

double unit_seconds(const std::string& unit) {
  if (unit == "s" || unit == "sec" || unit == "second" || unit == "seconds")
    return 1.0;
  if (unit == "h" || unit == "hour" || unit == "hours") return 3600.0;
  if (unit == "d" || unit == "day" || unit == "days") return 86400.0;
  throw ParseError("unknown time unit '" + unit + "'");
}

// Numbers followed by one optional trailing unit applying to all of them.
std::vector<double> parse_duration_list(const std::string& text) {
  std::vector<std::string> toks = split_ws(text);
  if (toks.empty()) throw ParseError("empty duration list");
  double factor = 1.0;
  if (!toks.back().empty() && !std::isdigit(static_cast<unsigned char>(toks.back()[0])) &&
      toks.back()[0] != '-' && toks.back()[0] != '.') {
    factor = unit_seconds(toks.back());
    toks.pop_back();
    if (toks.empty()) throw ParseError("duration list has a unit but no values");
  }
  std::vector<double> out;
  for (const std::string& t : toks) out.push_back(to_number(t) * factor);
  return out;
}

} // namespace

double parse_duration(const std::string& text) {
  const std::vector<double> v = parse_duration_list(text);
  if (v.size() != 1) throw ParseError("expected a single duration, got '" + text + "'");
  return v[0];
}

bool is_known_solver(const std::string& name) {
  return name == "newton" || name == "sfi_ut" || name == "fsmsn_p" ||
         name == "fsmsn_ut" || name == "mspin_p";
}

bool is_known_tolerance(const std::string& name) {
  return name == "fixed" || name == "a1" || name == "a2" || name == "a3";
}

std::vector<RunEntry> RunConfig::expand_sweep() const {
  if (!runs.empty()) return runs;
  std::vector<RunEntry> out;
  const std::vector<std::string> tols =
      tolerances.empty() ? std::vector<std::string>{"fixed"} : tolerances;
  const std::vector<double> dts = dt_list.empty() ? std::vector<double>{0.0} : dt_list;
  for (const std::string& solver : solvers)
    for (const std::string& tol : tols)
      for (double dt : dts) out.push_back({solver, tol, dt});
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  RunEntry* current_run = nullptr;

  auto fail = [&lineno](const std::string& msg) -> void {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "[run]") {
      cfg.runs.emplace_back();
      current_run = &cfg.runs.back();
      continue;
    }
    if (line.front() == '[') fail("unknown section '" + line + "'");

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail("expected 'key = value'");

    try {
      if (current_run != nullptr) {
        if (key == "solver") {
          if (!is_known_solver(value)) fail("unknown solver '" + value + "'");
          current_run->solver = value;
        } else if (key == "tolerance") {
          if (!is_known_tolerance(value)) fail("unknown tolerance strategy '" + value + "'");
          current_run->tolerance = value;
        } else if (key == "dt") {
          current_run->dt_seconds = parse_duration(value);
        } else {
          fail("unknown [run] key '" + key + "'");
        }
        continue;
      }

      if (key == "scenario") {
        cfg.scenario = value;
      } else if (key.rfind("scenario.", 0) == 0) {
        cfg.overrides[key.substr(9)] = value;
      } else if (key == "seed") {
        cfg.overrides["seed"] = value;
      } else if (key == "output") {
        cfg.output = value;
      } else if (key == "outer_tol") {
        cfg.outer_tol = to_number(value);
      } else if (key == "subproblem_tol") {
        cfg.subproblem_tol = to_number(value);
      } else if (key == "max_outer") {
        cfg.max_outer = static_cast<int>(to_number(value));
      } else if (key == "max_inner") {
        cfg.max_inner = static_cast<int>(to_number(value));
      } else if (key == "max_retries") {
        cfg.max_retries = static_cast<int>(to_number(value));
      } else if (key == "snapshot_times") {
        cfg.snapshot_times = parse_duration_list(value);
      } else if (key == "dt_list") {
        cfg.dt_list = parse_duration_list(value);
      } else if (key == "solvers") {
        cfg.solvers = split_ws(value);
        for (const std::string& s : cfg.solvers)
          if (!is_known_solver(s)) fail("unknown solver '" + s + "'");
      } else if (key == "tolerances") {
        cfg.tolerances = split_ws(value);
        for (const std::string& t : cfg.tolerances)
          if (!is_known_tolerance(t)) fail("unknown tolerance strategy '" + t + "'");
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  if (cfg.scenario.empty())
    throw ParseError("configuration is missing the 'scenario' key");
  for (const RunEntry& run : cfg.runs)
    if (run.solver.empty())
      throw ParseError("a [run] section is missing its 'solver' key");
  return cfg;
}

std::string default_config_text() {
  std::ostringstream out;
  const RunConfig d;
  out << "scenario = gravity_segregation\n";
  out << "output = " << d.output << "\n";
  out << "outer_tol = " << d.outer_tol << "\n";
  out << "subproblem_tol = " << d.subproblem_tol << "\n";
  out << "max_outer = " << d.max_outer << "\n";
  out << "max_inner = " << d.max_inner << "\n";
  out << "max_retries = " << d.max_retries << "\n";
  return out.str();
}

} // namespace pmflow::cli
