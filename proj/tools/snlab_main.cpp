// snlab -- numerical laboratory for saddle-node circle map unfoldings.
//
//   snlab <command> --config <path> [--seed N] [--out DIR]
//
// Commands: orbit, ulam, transition, basin, distortion, stat-sweep,
// stoch-sweep, homeo-sweep, verify. The command must match `command=` in
// the config file. Exit codes: 0 success, 1 hard-invariant failure,
// 2 usage error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "snlab/config.hpp"
#include "snlab/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"saddle-node circle map laboratory"};
    app.require_subcommand(1);

    struct Args {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out_dir;
    };
    Args args;

    const char* names[] = {"orbit", "ulam", "transition", "basin", "distortion",
                           "stat-sweep", "stoch-sweep", "homeo-sweep", "verify"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "config file path")->required();
        sub->add_option("--seed", args.seed, "override config seed");
        sub->add_option("--out", args.out_dir, "override output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        snlab::RunConfig cfg = snlab::parse_config_file(args.config_path);
        std::string sub = app.get_subcommands().front()->get_name();
        if (sub != snlab::command_name(cfg.command)) {
            std::cerr << "error: subcommand '" << sub << "' does not match config command '"
                      << snlab::command_name(cfg.command) << "'\n";
            return 2;
        }
        if (args.seed) cfg.seed = *args.seed;
        if (args.out_dir) cfg.out_dir = *args.out_dir;
        return snlab::run(cfg);
    } catch (const snlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const snlab::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const snlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
