#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epb/capacity.hpp"
#include "epb/classes.hpp"
#include "epb/envelope.hpp"
#include "epb/errors.hpp"
#include "epb/normalizer.hpp"
#include "epb/space.hpp"

namespace epb {

using json = nlohmann::json;

// ---- schema helpers: strict keys, typed getters, json-path diagnostics --------

namespace cfg {

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("at " + path + ": expected an object");
}

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
    require_object(j, path);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("at " + path + ": unknown key '" + it.key() + "'");
}

inline const json& require_key(const json& j, const std::string& path, const std::string& key) {
    require_object(j, path);
    if (!j.contains(key)) throw ConfigError("at " + path + ": missing required key '" + key + "'");
    return j.at(key);
}

inline double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("at " + path + ": expected a number");
    return j.get<double>();
}

inline std::int64_t get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("at " + path + ": expected an integer");
    return j.get<std::int64_t>();
}

inline std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError("at " + path + ": expected a string");
    return j.get<std::string>();
}

inline std::vector<double> get_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("at " + path + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("at " + path + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::vector<std::int64_t> get_integer_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("at " + path + ": expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError("at " + path + ": expected integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

} // namespace cfg

// ---- spec fragments -------------------------------------------------------------

inline Distribution distribution_from_json(const json& j, const std::string& path) {
    const std::string kind = cfg::get_string(cfg::require_key(j, path, "kind"), path + ".kind");
    if (kind == "uniform") {
        cfg::check_keys(j, path, {"kind"});
        return Distribution::uniform();
    }
    if (kind == "piecewise") {
        cfg::check_keys(j, path, {"kind", "breaks", "densities"});
        return Distribution(ContinuousLine::piecewise(
            cfg::get_number_array(cfg::require_key(j, path, "breaks"), path + ".breaks"),
            cfg::get_number_array(cfg::require_key(j, path, "densities"), path + ".densities")));
    }
    if (kind == "finite") {
        cfg::check_keys(j, path, {"kind", "atoms", "probs"});
        return Distribution(FiniteSpace(
            cfg::get_number_array(cfg::require_key(j, path, "atoms"), path + ".atoms"),
            cfg::get_number_array(cfg::require_key(j, path, "probs"), path + ".probs")));
    }
    throw ConfigError("at " + path + ".kind: unknown distribution '" + kind + "'");
}

inline std::shared_ptr<const FunctionClass> class_from_json(const json& j, const std::string& path,
                                                            const Distribution& dist) {
    const std::string kind = cfg::get_string(cfg::require_key(j, path, "kind"), path + ".kind");
    if (kind == "thresholds") {
        cfg::check_keys(j, path, {"kind"});
        return std::make_shared<Thresholds>(dist);
    }
    if (kind == "intervals") {
        cfg::check_keys(j, path, {"kind"});
        return std::make_shared<Intervals>(dist);
    }
    if (kind == "ramps") {
        cfg::check_keys(j, path, {"kind"});
        return std::make_shared<Ramps>(dist);
    }
    if (kind == "explicit") {
        cfg::check_keys(j, path, {"kind", "values", "csv"});
        if (!dist.is_finite())
            throw ConfigError("at " + path + ": explicit classes need a finite distribution");
        if (j.contains("values") == j.contains("csv"))
            throw ConfigError("at " + path + ": provide exactly one of 'values' or 'csv'");
        std::vector<std::vector<double>> rows;
        if (j.contains("values")) {
            const json& vals = j.at("values");
            if (!vals.is_array()) throw ConfigError("at " + path + ".values: expected an array");
            for (const auto& r : vals)
                rows.push_back(cfg::get_number_array(r, path + ".values[]"));
        } else {
            const std::string file = cfg::get_string(j.at("csv"), path + ".csv");
            std::ifstream in(file);
            if (!in) throw ConfigError("at " + path + ".csv: cannot open '" + file + "'");
            rows = read_numeric_csv(in);
        }
        return std::make_shared<ExplicitMatrix>(dist.finite(), std::move(rows));
    }
    throw ConfigError("at " + path + ".kind: unknown class '" + kind + "'");
}

// Envelope spec: the analytic/table kinds of EntropyEnvelope plus
// "threshold_brackets", a measured bracketing table built from the
// experiment's continuous distribution.
inline EntropyEnvelope envelope_from_json(const json& j, const std::string& path,
                                          const Distribution* dist = nullptr) {
    const std::string kind = cfg::get_string(cfg::require_key(j, path, "kind"), path + ".kind");
    if (kind == "threshold_brackets") {
        cfg::check_keys(j, path, {"kind", "points"});
        if (!dist || dist->is_finite())
            throw ConfigError("at " + path +
                              ": threshold_brackets needs a continuous distribution in scope");
        std::int64_t points = 64;
        if (j.contains("points"))
            points = cfg::get_integer(j.at("points"), path + ".points");
        if (points < 2 || points > 65536)
            throw ConfigError("at " + path + ".points: expected 2..65536");
        std::vector<double> grid;
        for (std::int64_t k = 1; k <= points; ++k)
            grid.push_back(static_cast<double>(k) / static_cast<double>(points));
        return bracketing_table_envelope(dist->line(), grid);
    }
    try {
        return EntropyEnvelope::from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError("at " + path + ": " + e.what());
    }
}

inline Normalizer normalizer_from_json(const json& j, const std::string& path,
                                       const Distribution* dist = nullptr) {
    const std::string kind = cfg::get_string(cfg::require_key(j, path, "kind"), path + ".kind");
    if (kind == "sqrt_mean") {
        cfg::check_keys(j, path, {"kind"});
        return Normalizer::sqrt_mean();
    }
    if (kind == "constant") {
        cfg::check_keys(j, path, {"kind", "value"});
        return Normalizer::constant_phi(
            cfg::get_number(cfg::require_key(j, path, "value"), path + ".value"));
    }
    if (kind == "entropy" || kind == "bracketing") {
        cfg::check_keys(j, path, {"kind", "envelope"});
        auto env = envelope_from_json(cfg::require_key(j, path, "envelope"), path + ".envelope",
                                      dist);
        return kind == "entropy" ? Normalizer::entropy(std::move(env))
                                 : Normalizer::bracketing(std::move(env));
    }
    throw ConfigError("at " + path + ".kind: unknown normalizer '" + kind + "'");
}

// ---- top-level config --------------------------------------------------------------

enum class ExperimentKind { Capacity, Entropy, Chain, Kernel, Bound, Simulate, VerifyAll };

inline std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Capacity: return "capacity";
        case ExperimentKind::Entropy: return "entropy";
        case ExperimentKind::Chain: return "chain";
        case ExperimentKind::Kernel: return "kernel";
        case ExperimentKind::Bound: return "bound";
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::VerifyAll: return "verify-all";
    }
    return "?";
}

struct Config {
    ExperimentKind kind = ExperimentKind::VerifyAll;
    std::string out_dir = "epb-out";
    std::optional<std::uint64_t> seed;
    json raw;      // parsed document (canonical: nlohmann sorts keys on dump)
    json block;    // the kind-specific object

    std::uint64_t require_seed() const {
        if (!seed)
            throw ConfigError("this experiment is stochastic: a top-level 'seed' is required");
        return *seed;
    }
};

inline Config parse_config(const json& j) {
    static const std::set<std::string> kinds = {"capacity", "entropy", "chain",  "kernel",
                                                "bound",    "simulate", "verify-all"};
    cfg::check_keys(j, "$", {"experiment", "out", "seed", "capacity", "entropy", "chain",
                             "kernel", "bound", "simulate", "verify-all"});
    const std::string kind =
        cfg::get_string(cfg::require_key(j, "$", "experiment"), "$.experiment");
    if (!kinds.count(kind)) throw ConfigError("at $.experiment: unknown kind '" + kind + "'");

    Config config;
    config.raw = j;
    if (kind == "capacity") config.kind = ExperimentKind::Capacity;
    else if (kind == "entropy") config.kind = ExperimentKind::Entropy;
    else if (kind == "chain") config.kind = ExperimentKind::Chain;
    else if (kind == "kernel") config.kind = ExperimentKind::Kernel;
    else if (kind == "bound") config.kind = ExperimentKind::Bound;
    else if (kind == "simulate") config.kind = ExperimentKind::Simulate;
    else config.kind = ExperimentKind::VerifyAll;

    if (j.contains("out")) config.out_dir = cfg::get_string(j.at("out"), "$.out");
    if (j.contains("seed")) {
        const std::int64_t s = cfg::get_integer(j.at("seed"), "$.seed");
        config.seed = static_cast<std::uint64_t>(s);
    }
    for (const auto& other : kinds)
        if (other != kind && j.contains(other))
            throw ConfigError("at $: block '" + other + "' does not match experiment '" + kind +
                              "'");
    config.block = j.contains(kind) ? j.at(kind) : json::object();
    cfg::require_object(config.block, "$." + kind);
    return config;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

// Canonical serialization: UTF-8, sorted keys, no whitespace dependence.
inline std::string canonical_dump(const json& j) { return j.dump(); }

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string config_hash(const json& j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_dump(j))));
    return std::string(buf);
}

} // namespace epb
