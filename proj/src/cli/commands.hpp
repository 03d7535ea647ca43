#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wavereg::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitTolerance = 1,
    kExitConfig = 2,
    kExitOverflow = 3,
    kExitCoverage = 4,
    kExitSolver = 5,
};

struct Options {
    std::string config_path;  // empty: all defaults
    std::string out_dir;      // empty: current directory (kernel-eval: standard output)
    bool timestamp = true;
};

const std::vector<std::string>& command_names();

/// Runs one command. Output files are written only after the command has
/// finished; on any error nothing is written. Diagnostics go to err.
int run_command(const std::string& name, const Options& opts, std::ostream& out,
                std::ostream& err);

}  // namespace wavereg::cli
