#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epb/cli.hpp"
#include "epb/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"uniform-deviation bound workbench for empirical processes"};
    app.set_version_flag("--version", epb::kVersion);
    app.require_subcommand(1);

    epb::cli::Options opts;
    const std::vector<std::string> names = {"capacity", "entropy",  "chain",     "kernel-verify",
                                            "bound",    "simulate", "verify-all"};
    const std::vector<std::string> what = {
        "shattering, packing, and bracketing numbers",
        "entropy integrals and zero-error rates",
        "dyadic net hierarchy construction and dump",
        "exhaustive kernel-concentration check on a finite product space",
        "closed-form bound curves",
        "monte carlo median/tail/symmetrization experiments",
        "run the bundled desk-scale verification suite"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], what[i]);
        sub->add_option("--config", opts.config_path, "experiment config (json)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option_function<std::string>(
            "--out", [&](const std::string& v) { opts.out_dir = v; },
            "output directory (overrides config)");
        sub->add_option_function<std::int64_t>(
            "--seed", [&](std::int64_t v) { opts.seed = static_cast<std::uint64_t>(v); },
            "seed override");
        sub->add_option("--threads", opts.threads,
                        "worker threads (results never depend on this)");
        sub->callback([&opts, name = names[i]] { opts.subcommand = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return epb::cli::run(opts, std::cout, std::cerr);
}
