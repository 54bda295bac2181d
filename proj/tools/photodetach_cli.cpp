#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "photodetach/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"2D photodetachment simulator"};
    app.require_subcommand(1);

    photodetach::RunOptions opts;
    std::string dipole;
    std::vector<double> snapshot_at;
    double log_floor = 0.0;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"ground-state", "bound state of the configured potential"},
        {"propagate", "2D velocity-gauge propagation"},
        {"propagate1d", "1D dipole propagation"},
        {"classical", "classical trajectory, full and simplified"},
        {"kh-scan", "averaged potential and its two lowest states"},
        {"analyze", "ring census or sub-peak analysis of snapshots"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config_path, "config file")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--dipole", dipole, "dipole approximation")->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--snapshot-at", snapshot_at, "comma-separated cycle numbers")->delimiter(',');
        sub->add_option("--threads", opts.threads, "worker threads");
        sub->add_option("--log-floor", log_floor, "log scaling floor for PGM output");
        if (name == "analyze") sub->add_option("--input", opts.inputs, "snapshot files")->required();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (!dipole.empty()) opts.dipole = dipole == "on";
    for (auto* sub : subs) {
        if (!sub->parsed()) continue;
        if (sub->count("--snapshot-at")) opts.snapshot_cycles = snapshot_at;
        if (sub->count("--log-floor")) opts.log_floor = log_floor;
        return photodetach::run_command(sub->get_name(), opts, std::cout, std::cerr);
    }
    return 2;
}
