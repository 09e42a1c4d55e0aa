#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "epb/errors.hpp"

namespace epb {

// Uniform-entropy (or bracketing-entropy) envelope u -> D(u): a nonincreasing
// bound on packing (or bracketing) numbers, floored at 1 so log D >= 0.
struct EntropyEnvelope {
    enum class Kind { AnalyticConstant, AnalyticPower, AnalyticHaussler, Table, EmpiricalMax };

    Kind kind = Kind::AnalyticConstant;
    double constant = 2.0;                       // AnalyticConstant
    double c = 1.0, gamma = 1.0;                 // AnalyticPower: c u^-gamma
    int d = 1;                                   // AnalyticHaussler: e(d+1)(2e/u^2)^d
    std::vector<std::pair<double, double>> table; // (u, D), sorted by u ascending
    bool lower_estimate = false;                 // empirical tables underestimate sup_Q

    static EntropyEnvelope constant_envelope(double value) {
        EntropyEnvelope e;
        e.kind = Kind::AnalyticConstant;
        e.constant = value;
        return e;
    }
    static EntropyEnvelope power(double c, double gamma) {
        if (!(c > 0.0) || !(gamma > 0.0)) throw DomainError("power envelope: c, gamma must be > 0");
        EntropyEnvelope e;
        e.kind = Kind::AnalyticPower;
        e.c = c;
        e.gamma = gamma;
        return e;
    }
    static EntropyEnvelope haussler(int d) {
        if (d < 1) throw DomainError("haussler envelope: d >= 1 required");
        EntropyEnvelope e;
        e.kind = Kind::AnalyticHaussler;
        e.d = d;
        return e;
    }
    static EntropyEnvelope from_table(std::vector<std::pair<double, double>> rows,
                                      bool lower_estimate = false) {
        if (rows.empty()) throw DomainError("table envelope: empty table");
        std::sort(rows.begin(), rows.end());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!(rows[i].first > 0.0)) throw DomainError("table envelope: u values must be > 0");
            if (!(rows[i].second >= 1.0)) throw DomainError("table envelope: D values must be >= 1");
            if (i > 0 && rows[i].second > rows[i - 1].second)
                throw DomainError("table envelope: D must be nonincreasing in u");
            if (i > 0 && rows[i].first == rows[i - 1].first)
                throw DomainError("table envelope: duplicate u value");
        }
        EntropyEnvelope e;
        e.kind = lower_estimate ? Kind::EmpiricalMax : Kind::Table;
        e.table = std::move(rows);
        e.lower_estimate = lower_estimate;
        return e;
    }

    // D(u). Table kinds step to the next measured node at or above u, so the
    // interpolated value never exceeds the value measured at a finer scale.
    double at(double u) const {
        if (!(u > 0.0)) throw DomainError("envelope: u must be > 0");
        switch (kind) {
            case Kind::AnalyticConstant:
                return std::max(1.0, constant);
            case Kind::AnalyticPower:
                return std::max(1.0, c * std::pow(u, -gamma));
            case Kind::AnalyticHaussler: {
                const double e1 = std::exp(1.0);
                return std::max(1.0, e1 * (d + 1) * std::pow(2.0 * e1 / (u * u), d));
            }
            case Kind::Table:
            case Kind::EmpiricalMax: {
                auto it = std::lower_bound(
                    table.begin(), table.end(), u,
                    [](const std::pair<double, double>& row, double v) { return row.first < v; });
                if (it == table.end()) return table.back().second;
                return it->second;
            }
        }
        throw DomainError("envelope: unknown kind");
    }

    bool satisfies_d1_at_least_2() const { return at(1.0) >= 2.0; }

    // For C u^-g forms, returns (C, g); exact power shape enables the
    // log-substitution quadrature path.
    bool power_form(double& C, double& g) const {
        if (kind == Kind::AnalyticPower) {
            C = c;
            g = gamma;
            return true;
        }
        if (kind == Kind::AnalyticHaussler) {
            const double e1 = std::exp(1.0);
            C = e1 * (d + 1) * std::pow(2.0 * e1, d);
            g = 2.0 * d;
            return true;
        }
        return false;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind) {
            case Kind::AnalyticConstant:
                j["kind"] = "constant";
                j["value"] = constant;
                break;
            case Kind::AnalyticPower:
                j["kind"] = "power";
                j["c"] = c;
                j["gamma"] = gamma;
                break;
            case Kind::AnalyticHaussler:
                j["kind"] = "haussler";
                j["d"] = d;
                break;
            case Kind::Table:
            case Kind::EmpiricalMax: {
                j["kind"] = kind == Kind::Table ? "table" : "empirical";
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& [u, D] : table) rows.push_back({u, D});
                j["table"] = rows;
                break;
            }
        }
        return j;
    }

    static EntropyEnvelope from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
            throw ConfigError("envelope: expected object with string 'kind'");
        const std::string kind = j.at("kind").get<std::string>();
        auto check_keys = [&](std::initializer_list<const char*> allowed) {
            for (auto it = j.begin(); it != j.end(); ++it) {
                bool ok = std::string(it.key()) == "kind";
                for (const char* a : allowed) ok = ok || it.key() == a;
                if (!ok) throw ConfigError("envelope: unknown key '" + it.key() + "'");
            }
        };
        if (kind == "constant") {
            check_keys({"value"});
            if (!j.contains("value")) throw ConfigError("envelope: constant requires 'value'");
            return constant_envelope(j.at("value").get<double>());
        }
        if (kind == "power") {
            check_keys({"c", "gamma"});
            if (!j.contains("c") || !j.contains("gamma"))
                throw ConfigError("envelope: power requires 'c' and 'gamma'");
            return power(j.at("c").get<double>(), j.at("gamma").get<double>());
        }
        if (kind == "haussler") {
            check_keys({"d"});
            if (!j.contains("d")) throw ConfigError("envelope: haussler requires 'd'");
            return haussler(j.at("d").get<int>());
        }
        if (kind == "table" || kind == "empirical") {
            check_keys({"table"});
            if (!j.contains("table") || !j.at("table").is_array())
                throw ConfigError("envelope: table requires array 'table'");
            std::vector<std::pair<double, double>> rows;
            for (const auto& r : j.at("table")) {
                if (!r.is_array() || r.size() != 2)
                    throw ConfigError("envelope: table rows must be [u, D] pairs");
                rows.emplace_back(r[0].get<double>(), r[1].get<double>());
            }
            return from_table(std::move(rows), kind == "empirical");
        }
        throw ConfigError("envelope: unknown kind '" + kind + "'");
    }
};

} // namespace epb
