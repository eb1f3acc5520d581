#pragma once

#include <string>

#include "config.hpp"

namespace pmflow::cli {

/// Executes the runs of a configuration through the shared-library C API and
/// writes the artifacts (iteration table, histories, field snapshots) under
/// the configured output directory. Returns the process exit code: 0 on full
/// success, 2 when any run did not converge, 1 on error.
int execute_config(const RunConfig& config, bool sweep, std::ostream& log);

/// Resolves the output directory, honoring the PMFLOW_OUTPUT_ROOT override.
std::string resolve_output_dir(const std::string& configured);

int list_scenarios(std::ostream& out);

} // namespace pmflow::cli
