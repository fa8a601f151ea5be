// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

// Tabular output for the command-line front end: a manifest block followed
// by one table, written either as CSV with `#` comment lines or as JSON.

#include <fmt/format.h>
#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace secres::cli {

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::pair<std::string, std::string>> manifest;
    std::vector<std::string> notes;      ///< trailing comment lines (summaries, self-checks)
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void meta(const std::string& k, const std::string& v) { manifest.emplace_back(k, v); }
};

inline std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    return std::get<std::string>(c);
}

inline void write_csv(std::ostream& os, const Table& t)
{
    for (const auto& [k, v] : t.manifest) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
        os << '\n';
    }
    for (const auto& n : t.notes) os << "# " << n << '\n';
}

inline void write_json(std::ostream& os, const Table& t)
{
    nlohmann::ordered_json j;
    for (const auto& [k, v] : t.manifest) j["manifest"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (const auto& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
        j["rows"].push_back(std::move(row));
    }
    j["notes"] = t.notes;
    os << j.dump(2) << '\n';
}

/// 64-bit FNV-1a, used to fingerprint the effective configuration.
inline std::string fnv1a_hex(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

} // namespace secres::cli
