#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "wavereg/parallel.hpp"

int main(int argc, char** argv) {
    using namespace wavereg::cli;

    CLI::App app{"Regularized reconstruction of interior wave-equation values from boundary data"};
    std::string command;
    Options opts;
    int threads = 0;
    bool no_timestamp = false;
    app.add_option("command", command, "kernel-eval | kernel-check | reconstruct | fdtd | decay | spectral")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", opts.config_path, "JSON configuration file (defaults if omitted)");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: all cores)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--no-timestamp", no_timestamp, "omit timestamps from outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    opts.timestamp = !no_timestamp;
    if (threads > 0) {
        wavereg::parallel::set_thread_count(threads);
    }
    return run_command(command, opts, std::cout, std::cerr);
}
