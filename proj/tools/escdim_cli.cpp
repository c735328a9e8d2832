#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "escdim/cli.hpp"
#include "escdim/selftest.hpp"

// Thin dispatcher: flag parsing here, all real work in the library commands.
// Exit codes: 0 success, 1 computation/validation failure, 2 usage error.
int main(int argc, char** argv) {
    CLI::App app{"escaping-set dimension toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_override, suite;
    double c1 = 0.5;

    CLI::App* counting =
        app.add_subcommand("counting", "counting functions and order estimate");
    CLI::App* dim_bound =
        app.add_subcommand("dim-bound", "nested-cover dimension bound");
    CLI::App* render =
        app.add_subcommand("render", "escape-field image and point set");
    for (CLI::App* cmd : {counting, dim_bound, render}) {
        cmd->add_option("--config", config_path, "run configuration file")
            ->required();
        cmd->add_option("--out", out_override, "output base path override");
    }
    CLI::App* selftest =
        app.add_subcommand("selftest", "invariant batteries for every module");
    selftest->add_option("--suite", suite, "run a single suite by name");
    selftest->add_option("--c1", c1,
                         "branch-derivative constant fed to the covering suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean, bad usage -> 2
    }

    try {
        if (selftest->parsed()) {
            escdim::SelftestOptions opt;
            opt.suite = suite;
            opt.c1 = c1;
            return escdim::cmd_selftest(opt, std::cout);
        }
        escdim::RunConfig cfg = escdim::parse_config_file(config_path);
        if (!out_override.empty()) cfg.out = out_override;
        if (counting->parsed()) return escdim::cmd_counting(cfg, std::cout);
        if (dim_bound->parsed()) return escdim::cmd_dim_bound(cfg, std::cout);
        return escdim::cmd_render(cfg, std::cout);
    } catch (const escdim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
