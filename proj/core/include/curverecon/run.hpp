#pragma once

#include <iosfwd>
#include <string>

namespace curverecon {

// Exit codes shared by the library runner and the command line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_solver_failure = 1,
    exit_warnings = 2,
    exit_config = 64,
    exit_io = 74,
};

struct RunOptions {
    std::string mode;         // march, pc, pc-fixed-point, verify, converge, demo
    std::string config_path;  // JSON file; optional for demo
    std::string preset;       // demo preset when no config is given
    std::string out_dir;      // empty: log only, no files
    bool force = false;       // overwrite an existing output directory
    int workers = 0;          // 0: CURVERECON_WORKERS, then hardware
};

int run(const RunOptions& opt, std::ostream& log);

}  // namespace curverecon
