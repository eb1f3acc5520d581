#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmflow::cli {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One experiment: solver x tolerance strategy x time step.
struct RunEntry {
  std::string solver;            // newton | sfi_ut | fsmsn_p | fsmsn_ut | mspin_p
  std::string tolerance = "fixed"; // fixed | a1 | a2 | a3
  double dt_seconds = 0.0;       // 0: scenario default
};

/// Parsed experiment configuration (global keys + [run] sections).
struct RunConfig {
  std::string scenario;
  std::map<std::string, std::string> overrides; // scenario.<key> entries
  std::string output = "pmflow-out";
  double outer_tol = 1e-8;
  double subproblem_tol = 1e-6;
  int max_outer = 200;
  int max_inner = 50;
  int max_retries = 4;
  std::vector<double> snapshot_times; // seconds
  std::vector<RunEntry> runs;         // explicit [run] sections

  // sweep lists (cartesian product)
  std::vector<std::string> solvers;
  std::vector<std::string> tolerances;
  std::vector<double> dt_list; // seconds

  /// Explicit runs when present, otherwise the sweep product.
  std::vector<RunEntry> expand_sweep() const;
};

/// Parses the line-oriented `key = value` configuration text. Unknown keys,
/// unknown solver or tolerance names, and malformed values are rejected with
/// the offending line number.
RunConfig parse_config(const std::string& text);

/// "10 day" / "2 hour" / "864000" -> seconds.
double parse_duration(const std::string& text);

bool is_known_solver(const std::string& name);
bool is_known_tolerance(const std::string& name);

/// Default configuration text; parse_config(default_config_text()) reproduces
/// the default RunConfig.
std::string default_config_text();

} // namespace pmflow::cli
