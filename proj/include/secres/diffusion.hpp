// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/melnikov.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace secres {

/// A point of the cylinder in global coordinates.
struct CylinderPoint {
    double J = 0.0;
    double OmegaM = 0.0;   ///< [0, 2 pi)
};

struct TableSettings {
    double E_lo = -2.12e-7;
    double E_hi = 1.36e-6;
    int N = 121;                          ///< uniform E-grid, N >= 4
    MelnikovSettings mel{};
    std::vector<double> tangencies;       ///< pri tangency energies (sec bands are centred there)
    double delta_E = 1e-9;                ///< half-width of the sec bands
    int threads = 1;
};

/// Sampled first-order coefficients on a uniform energy grid, with cubic
/// B-spline interpolants. B1 of the pri channel is interpolated through its
/// two slowly varying parts and the phase shift.
class DiffusionTables {
public:
    DiffusionTables() = default;

    double n() const { return n_; }
    double alpha3() const { return alpha3_; }
    double E_lo() const { return E.front(); }
    double E_hi() const { return E.back(); }
    double J_of(double En) const { return -En / n_; }
    double E_of(double J) const { return -n_ * J; }

    double T0(double En) const;
    double zeta(double En, Channel ch = Channel::Pri) const;
    cplx A1(double En) const;
    cplx B1(double En, Channel ch = Channel::Pri) const;
    double e_max(double En) const;
    double i_section(double En) const;   ///< periodic orbit at h = 0 [deg]

    /// Index of the sec band containing E, or -1.
    int sec_band(double En) const;
    bool in_domain(double En, Channel ch) const;
    double delta_E() const { return delta_E_; }

    // Raw samples.
    std::vector<double> E, T0s, zetas, e_maxs, i_secs, hom_i_min, hom_i_max;
    std::vector<cplx> A1s, B1_backs, B1_fwds;
    std::vector<MelnikovRecord> sec;   ///< sec-channel records at the tangency energies
    std::vector<std::string> warnings;

    /// Assembles the interpolants from the raw samples.
    void finalize(double n, double alpha3, double delta_E);

private:
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    Spline T0_, zeta_, emax_, isec_, A1r_, A1i_, bbr_, bbi_, bfr_, bfi_;
    double n_ = 0.0, alpha3_ = 0.0, delta_E_ = 0.0;
    void check(double En) const;
};

/// Pri coefficients by continuation of the first homoclinic crossing along
/// the grid (one anchor per worker), plus the sec records at the tangencies.
DiffusionTables build_tables(const Model& m, const TableSettings& ts);

/// J' = J + i_M (A1 e^{i Omega} + c.c.), Omega' = Omega + n T0(J). Both
/// readings of the phase advance (at J or at J') agree to first order; the
/// second keeps the map closer to area preservation.
CylinderPoint inner_map(const CylinderPoint& p, double iM, const DiffusionTables& t,
                        bool phase_at_new_action = false);

/// J' = J + i_M (B1 e^{i Omega} + c.c.), Omega' = Omega + n zeta(J).
/// Throws DomainError outside the channel's domain.
CylinderPoint outer_map(const CylinderPoint& p, Channel ch, double iM, const DiffusionTables& t,
                        bool phase_at_new_action = false);

enum class Move { Inner, OuterPri, OuterSec };
std::string to_string(Move mv);

struct BuilderSettings {
    double E_start = 1.3e-6;       ///< J_min = J(E_start)
    double E_end = 1.7e-8;         ///< J_max = J(E_end)
    long max_iter = 200000;        ///< inner steps allowed while waiting for a phase
    long max_moves = 50'000'000;   ///< total moves before giving up (reached = false)
    double resonance_gate = 1e-3;  ///< |n T0 - 4 pi| below this selects the A1-hat target
    /// Inner phase advance evaluated at the updated action. The outer map
    /// always uses the phase shift at the departing action.
    bool inner_phase_at_new_action = true;
    double window_fraction = 0.5;  ///< targeted move when its gain is >= this fraction of the maximum
};

struct PseudoOrbit {
    std::vector<CylinderPoint> points;   ///< points[0] is the start
    std::vector<Move> moves;             ///< moves[k] maps points[k] to points[k + 1]
    std::vector<double> jumps;           ///< J increment of each move
    double iM = 0.0, nu = 0.0, delta = 0.0;
    double J_min = 0.0, J_max = 0.0;
    long n_inner = 0, n_outer = 0;
    bool reached = false;
};

/// Greedy transition chain from J_min towards J_max: inner iterates until the
/// straightened outer jump is at least half its maximum, then one outer move
/// (roles swapped inside the resonance gate).
PseudoOrbit build_pseudo_orbit(double iM, double nu, double delta, const DiffusionTables& t,
                               std::uint64_t seed, const BuilderSettings& bs = {});

struct DriftSummary {
    double E_start = 0.0, E_end = 0.0, E_min = 0.0, E_max = 0.0;
    double e_start = 0.0, e_end = 0.0, e_lo = 0.0, e_hi = 0.0;
    double i_lo = 0.0, i_hi = 0.0;       ///< [deg], section inclinations along the path
    long steps = 0, n_inner = 0, n_outer = 0;
    double max_gain = 0.0;               ///< largest J increment of a single move
    double gain_bound_violation = 0.0;   ///< max of gain - i_M (2|B1| + 2|A1|), <= 0 when respected
};

DriftSummary report_drift(const PseudoOrbit& po, const DiffusionTables& t);

struct ScalingPoint {
    double iM = 0.0;
    long steps = 0;
    bool reached = false;
};
struct ScalingStudy {
    std::vector<ScalingPoint> points;
    double slope = 0.0;   ///< least-squares slope of log(steps) against log(i_M)
};
ScalingStudy scaling_study(const std::vector<double>& iMs, double nu, double delta,
                           const DiffusionTables& t, std::uint64_t seed,
                           const BuilderSettings& bs = {});

} // namespace secres
