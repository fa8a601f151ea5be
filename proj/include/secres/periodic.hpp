// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/dynamics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secres {

enum class OrbitKind { Hyperbolic, Elliptic };

/// Circular periodic orbit (0, Gamma_E(t), 0, h_E(t)) at energy E.
struct PeriodicOrbitRecord {
    double E = 0.0;
    double Gam0 = 0.0;          ///< Gamma at h = 0
    double T0 = 0.0;            ///< period (positive physical time)
    double T0_physical = 0.0;   ///< same period from the time-parametrized return
    double lambda_mult = 0.0;   ///< monodromy eigenvalue of modulus > 1 (or 1 if elliptic)
    double exponent = 0.0;      ///< log(lambda_mult) / T0
    Eigen::Vector2d evec_u{0, 0};  ///< (xi, eta) components, unit length, eta >= 0
    Eigen::Vector2d evec_s{0, 0};
    Eigen::Matrix4d monodromy = Eigen::Matrix4d::Identity();
    OrbitKind kind = OrbitKind::Elliptic;
    double i_min = 0.0, i_max = 0.0;   ///< osculating inclination range along the orbit [rad]
    double i_section = 0.0;            ///< inclination on the section {h = 0} [rad]

    double J(double n) const { return -E / n; }
};

/// Boundary energies of the circular family: E2 = H_CP(0,0,0,0) and
/// E1 = H_CP(0, 0.49 L, 0, pi).
double energy_E2(const Model& m);
double energy_E1(const Model& m);

/// Gamma on the invariant plane at h = 0 for energy E (bisection + Newton
/// on [0, 0.49 L]).
double periodic_gamma0(double E, const Model& m);

/// Period from the h-parametrized reduced system on the invariant plane.
double periodic_period(double E, const Model& m, const FlowSettings& fs = {});

PeriodicOrbitRecord solve_periodic(double E, const Model& m, const FlowSettings& fs = {});

struct PeriodicScanRow {
    double E = 0.0;
    std::optional<PeriodicOrbitRecord> rec;
    std::string error;
};

/// Per-energy records; failures are recorded and the scan continues.
/// Rows are returned in input order; `threads` > 1 evaluates in parallel.
std::vector<PeriodicScanRow> scan_periodic(const std::vector<double>& E_grid, const Model& m,
                                           const FlowSettings& fs = {}, int threads = 1);

/// Energy and action of the secondary resonance n T0 = 4 pi, bisected inside
/// [E_lo, E_hi] to |n T0 - 4 pi| < 1e-10.
struct ResonanceLocation {
    double J_res = 0.0;
    double E_res = 0.0;
};
ResonanceLocation find_Jres(const Model& m, const FlowSettings& fs = {},
                            double E_lo = -2.12e-7, double E_hi = 1.36e-6);

enum class EquilibriumKind { Center, Saddle, Degenerate };

struct AveragedEquilibrium {
    double Gam = 0.0;
    EquilibriumKind kind = EquilibriumKind::Degenerate;
    double eigsq = 0.0;      ///< lambda^2 of the linearization at xi = eta = 0
};

AveragedEquilibrium classify_averaged(double Gam, const Model& m);

struct AveragedThresholds {
    double Gam1 = 0.0, Gam2 = 0.0;
    double E1_av = 0.0, E2_av = 0.0;
};
AveragedThresholds find_Gamma12(const Model& m);

} // namespace secres
