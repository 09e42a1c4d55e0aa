#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epb/config.hpp"
#include "epb/version.hpp"

namespace epb {

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

// Run manifest: written before any output row so a crashed run still records
// what was attempted and under which config hash.
inline nlohmann::json make_manifest(const nlohmann::json& config,
                                    const nlohmann::json& derived,
                                    const std::vector<std::string>& outputs) {
    nlohmann::json m;
    m["config_hash"] = config_hash(config);
    m["tool_version"] = kVersion;
    m["timestamp"] = utc_timestamp();
    m["derived"] = derived;
    m["outputs"] = outputs;
    return m;
}

inline void write_manifest(const std::string& dir, const nlohmann::json& manifest) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw Error("cannot write manifest in " + dir);
    out << manifest.dump(2) << "\n";
}

} // namespace epb
