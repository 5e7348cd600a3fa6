#pragma once

#include <string>

#include "hadlab/config.hpp"

namespace hadlab {

/// Exit-code contract: 0 pass, 1 check failed, 2 usage/config error,
/// 3 numerical nonconvergence.
struct RunOutcome {
    int exit_code = 0;
    std::string report_path; ///< main JSON artifact written for the command
};

/// Executes a parsed config: runs the mapped module operations and writes
/// CSV/JSON artifacts under cfg.output_dir.
RunOutcome run(const RunConfig& cfg, bool quiet = false);

} // namespace hadlab
