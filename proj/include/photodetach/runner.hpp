#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace photodetach {

/// Command-line overrides applied on top of the config file.
struct RunOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<bool> dipole;
    std::optional<std::vector<double>> snapshot_cycles;
    std::optional<double> log_floor;
    int threads = 0;  // 0: leave the OpenMP default
    std::vector<std::string> inputs;  // analyze: snapshot files
};

/// Subcommands: ground-state, propagate, propagate1d, classical, kh-scan, analyze.
/// Results go to files under the output directory and a `key = value`
/// summary on `out`. On failure a single `error: <message>` line goes to
/// `err` and the return value is nonzero.
int run_command(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace photodetach
