// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include <iosfwd>
#include <map>
#include <numbers>
#include <string>

namespace secres {

/// Physical constants in km / s / day units, as read from a config file.
struct PhysicalConstants {
    double mu = 398600.44;       ///< Earth gravitational parameter [km^3/s^2]
    double mu_M = 4902.87;       ///< Moon gravitational parameter [km^3/s^2]
    double a_M = 384400.0;       ///< Moon semi-major axis [km]
    double e_M = 0.0549006;      ///< Moon eccentricity entering rho1 (see README)
    double J2 = 1.08e-3;         ///< Earth second zonal harmonic
    double R_E = 6378.14;        ///< Earth equatorial radius [km]
    double eps_deg = 23.44;      ///< obliquity of the ecliptic [deg]
    double a_sat = 29600.0;      ///< satellite semi-major axis [km]
    double T_saros = 6585.321347;///< period of the lunar node [days]
    /// "printed": Giacaglia coefficients from the 6-decimal table at 23.44 deg;
    /// "closed": evaluate the closed forms in cos(eps/2), sin(eps/2).
    std::string giacaglia = "printed";
};

/// Non-dimensional model parameters. Distance unit a_sat, time unit
/// sqrt(a_sat^3/mu), so that mu = 1 and L = 1.
struct ModelParams {
    PhysicalConstants raw;

    double L = 1.0;
    double alpha = 0.0;
    double rho0 = 0.0;
    double rho1 = 0.0;
    double n_OmegaM = 0.0;
    double eps = 0.0;            ///< obliquity [rad]

    double length_unit_km = 0.0;
    double time_unit_s = 0.0;

    double to_seconds(double t_nd) const { return t_nd * time_unit_s; }
    double to_nd_time(double seconds) const { return seconds / time_unit_s; }
    double to_km(double d_nd) const { return d_nd * length_unit_km; }
    double to_nd_length(double km) const { return km / length_unit_km; }
    /// Satellite orbital period in the same units as the Saros period (days).
    double satellite_period_days() const;
};

constexpr double kSecondsPerDay = 86400.0;

/// Builds the non-dimensional parameter set. Throws ConfigError on
/// non-positive constants or a_sat <= R_E.
ModelParams nondimensionalize(const PhysicalConstants& raw);

/// Recovers the physical constants from a parameter set by converting the
/// derived non-dimensional quantities back to physical units.
PhysicalConstants dimensionalize(const ModelParams& p);

/// Applies `name = value` lines on top of `base`. Blank lines and `#` comments
/// are ignored. Unknown keys or unparsable values throw ConfigError.
PhysicalConstants parse_config(const std::string& text,
                               PhysicalConstants base = {});

PhysicalConstants load_config_file(const std::string& path,
                                   PhysicalConstants base = {});

/// Flat key/value view of a constants set, in config-file key order.
std::map<std::string, std::string> config_entries(const PhysicalConstants& c);

/// Stable textual form `key = value` per line; parse_config(serialize(c)) == c.
std::string serialize_config(const PhysicalConstants& c);

} // namespace secres
