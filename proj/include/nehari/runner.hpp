#pragma once

#include <string>

#include "nehari/config.hpp"

namespace nehari {

struct RunResult {
    int exit_code = 0;           // 0 ok, 1 solver non-convergence, 2 config/geometry error
    std::string report_json;     // deterministic report (also written to <out>/<command>.json)
    std::string report_path;
};

/// Executes one CLI command. Writes the report and any field dumps under
/// `out_dir` (created if needed). Reports contain the full resolved
/// config and no timestamps; wall-clock metadata goes to a separate
/// <command>_meta.json so identical configs produce byte-identical
/// reports.
RunResult run_command(const std::string& command, const RunConfig& cfg,
                      const std::string& out_dir);

/// Maps an error to the process exit code contract.
int exit_code_for(ErrorCode code);

} // namespace nehari
