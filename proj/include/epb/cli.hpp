#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "epb/experiments.hpp"
#include "epb/manifest.hpp"
#include "epb/parallel.hpp"

namespace epb::cli {

struct Options {
    std::string subcommand;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0; // 0 = auto
};

inline ExperimentKind subcommand_kind(const std::string& name) {
    if (name == "capacity") return ExperimentKind::Capacity;
    if (name == "entropy") return ExperimentKind::Entropy;
    if (name == "chain") return ExperimentKind::Chain;
    if (name == "kernel-verify") return ExperimentKind::Kernel;
    if (name == "bound") return ExperimentKind::Bound;
    if (name == "simulate") return ExperimentKind::Simulate;
    if (name == "verify-all") return ExperimentKind::VerifyAll;
    throw ConfigError("unknown subcommand: " + name);
}

// Loads the config, applies flag overrides, runs the experiment, writes the
// manifest before any data file. Exit status: 0 pass, 1 property failure,
// 2 config error.
inline int run(const Options& opts, std::ostream& out, std::ostream& err) {
    try {
        Config config = load_config(opts.config_path);
        if (config.kind != subcommand_kind(opts.subcommand))
            throw ConfigError("config experiment '" + kind_name(config.kind) +
                              "' does not match subcommand '" + opts.subcommand + "'");
        if (opts.seed) {
            config.seed = *opts.seed;
            config.raw["seed"] = *opts.seed; // the hash must reflect the effective config
        }
        if (opts.out_dir) config.out_dir = *opts.out_dir;
        const int threads = opts.threads > 0 ? opts.threads : default_threads();

        RunOutput result = run_experiment(config, threads);

        std::vector<std::string> names;
        for (const auto& [name, _] : result.files) names.push_back(name);
        const auto manifest = make_manifest(config.raw, result.derived, names);
        write_manifest(config.out_dir, manifest);
        for (const auto& [name, payload] : result.files) {
            std::ofstream f(config.out_dir + "/" + name, std::ios::binary);
            if (!f) throw Error("cannot write " + config.out_dir + "/" + name);
            f << payload;
        }
        for (const auto& line : result.log) out << line << "\n";
        out << (result.pass ? "PASS" : "FAIL") << ": " << opts.subcommand << " -> "
            << config.out_dir << "\n";
        return result.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ProtocolError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace epb::cli
