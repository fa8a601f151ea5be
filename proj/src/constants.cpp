// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/constants.hpp"
#include "secres/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace secres {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out))
        throw ConfigError("config: value of '" + key + "' is not a number: '" + value + "'");
    return out;
}

std::string format_exact(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

double ModelParams::satellite_period_days() const
{
    return 2.0 * std::numbers::pi * time_unit_s / kSecondsPerDay;
}

ModelParams nondimensionalize(const PhysicalConstants& raw)
{
    const double positives[] = {raw.mu, raw.mu_M, raw.a_M, raw.J2, raw.R_E,
                                raw.eps_deg, raw.a_sat, raw.T_saros};
    for (double v : positives)
        if (!(v > 0.0)) throw ConfigError("config: all physical constants must be positive");
    if (!(raw.e_M >= 0.0 && raw.e_M < 1.0))
        throw ConfigError("config: e_M must lie in [0, 1)");
    if (!(raw.a_sat > raw.R_E))
        throw ConfigError("config: a_sat must exceed R_E");
    if (raw.giacaglia != "printed" && raw.giacaglia != "closed")
        throw ConfigError("config: giacaglia must be 'printed' or 'closed'");

    ModelParams p;
    p.raw = raw;
    p.length_unit_km = raw.a_sat;
    p.time_unit_s = std::sqrt(raw.a_sat * raw.a_sat * raw.a_sat / raw.mu);
    p.L = 1.0;
    p.alpha = raw.a_sat / raw.a_M;
    const double r = raw.R_E / raw.a_sat;
    p.rho0 = raw.J2 * r * r;
    p.rho1 = (raw.mu_M / raw.mu) / std::pow(1.0 - raw.e_M * raw.e_M, 1.5);
    p.n_OmegaM = 2.0 * std::numbers::pi / p.to_nd_time(raw.T_saros * kSecondsPerDay);
    p.eps = raw.eps_deg * std::numbers::pi / 180.0;
    return p;
}

PhysicalConstants dimensionalize(const ModelParams& p)
{
    PhysicalConstants c = p.raw;
    const double a = p.length_unit_km;
    c.a_sat = a;
    c.mu = a * a * a / (p.time_unit_s * p.time_unit_s);
    c.a_M = a / p.alpha;
    const double r = c.R_E / a;
    c.J2 = p.rho0 / (r * r);
    c.mu_M = p.rho1 * c.mu * std::pow(1.0 - c.e_M * c.e_M, 1.5);
    c.T_saros = p.to_seconds(2.0 * std::numbers::pi / p.n_OmegaM) / kSecondsPerDay;
    c.eps_deg = p.eps * 180.0 / std::numbers::pi;
    return c;
}

PhysicalConstants parse_config(const std::string& text, PhysicalConstants base)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'name = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "giacaglia") {
            base.giacaglia = value;
            continue;
        }
        double* slot = nullptr;
        if (key == "mu") slot = &base.mu;
        else if (key == "mu_M") slot = &base.mu_M;
        else if (key == "a_M") slot = &base.a_M;
        else if (key == "e_M") slot = &base.e_M;
        else if (key == "J2") slot = &base.J2;
        else if (key == "R_E") slot = &base.R_E;
        else if (key == "eps_deg") slot = &base.eps_deg;
        else if (key == "a_sat") slot = &base.a_sat;
        else if (key == "T_saros") slot = &base.T_saros;
        else
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        *slot = parse_number(key, value);
    }
    return base;
}

PhysicalConstants load_config_file(const std::string& path, PhysicalConstants base)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), base);
}

std::map<std::string, std::string> config_entries(const PhysicalConstants& c)
{
    return {
        {"mu", format_exact(c.mu)},         {"mu_M", format_exact(c.mu_M)},
        {"a_M", format_exact(c.a_M)},       {"e_M", format_exact(c.e_M)},
        {"J2", format_exact(c.J2)},         {"R_E", format_exact(c.R_E)},
        {"eps_deg", format_exact(c.eps_deg)}, {"a_sat", format_exact(c.a_sat)},
        {"T_saros", format_exact(c.T_saros)}, {"giacaglia", c.giacaglia},
    };
}

std::string serialize_config(const PhysicalConstants& c)
{
    std::string out;
    for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
    return out;
}

} // namespace secres
