// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/periodic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secres {

enum class Side { Unstable, Stable };
enum class Channel { Pri, Sec };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

struct ManifoldSettings {
    /// Near the fixed point xi and eta are O(seed_dist); a tiny absolute
    /// tolerance makes their error control relative.
    FlowSettings flow{1e-24, 1e-14, 0.0, 1e-13, 2'000'000};
    double seed_dist = 1e-8;     ///< distance of the fundamental domain from the fixed point
    int samples = 64;            ///< initial samples of the fundamental domain
    double delta_max = 1e-3;     ///< maximal spacing between consecutive polyline points
    double search_delta = 1e-2;  ///< spacing used while searching for axis crossings
    double min_du = 1e-13;       ///< refinement stops below this parameter gap
    int max_iter = 90;           ///< search depth for homoclinic points
    std::size_t max_points = 400000;
    int branch_sign = -1;        ///< -1: seeded along -evec
    double section_h = 0.0;      ///< section {h = section_h}; 0 or pi
    /// Refined points are rejected when the axis residual exceeds
    /// max(axis_tol_hard, axis_tol_rel * |coordinate along the axis|). Sec
    /// points can lie within 1e-5 of the saddle, where the absolute floor
    /// is out of reach.
    double axis_tol_hard = 1e-9;
    double axis_tol_rel = 1e-3;
};

/// A point of a branch, labelled by its iterate count and fundamental-domain
/// parameter u in [0, 1].
struct ManifoldPoint {
    int n = 0;
    double u = 0.0;
    PoincareState s;
};

struct ManifoldBranch {
    double E = 0.0;
    Side side = Side::Unstable;
    int sign = -1;
    int iter_depth = 0;
    std::vector<ManifoldPoint> points;
};

/// q(n, u) = Pi^n(seed(u)) (Pi^{-n} on the stable side), seed(u) at distance
/// seed_dist * lambda^u along sign * evec, Gamma recovered in the energy level.
class BranchParam {
public:
    BranchParam(const Model& m, const PeriodicOrbitRecord& rec, Side side, int sign,
                const ManifoldSettings& ms);

    PoincareState seed(double u) const;
    /// One return on the branch's side, state kept at h = 0.
    PoincareState step(const PoincareState& p) const;
    /// The section point: h = 0 data flowed to the display section.
    PoincareState on_section(const PoincareState& base) const;
    PoincareState base_point(int n, double u) const;
    PoincareState point(int n, double u) const { return on_section(base_point(n, u)); }

    struct Tangent {
        PoincareState s;          ///< on the display section
        Eigen::Vector3d t;        ///< d(eta, Gamma, xi) / du
    };
    Tangent point_tangent(int n, double u) const;

    const PeriodicOrbitRecord& record() const { return rec_; }
    const Model& model() const { return m_; }
    const ManifoldSettings& settings() const { return ms_; }
    Side side() const { return side_; }
    int sign() const { return sign_; }
    Eigen::Vector2d direction() const { return dir_; }   ///< sign * evec, (xi, eta)

private:
    const Model& m_;
    PeriodicOrbitRecord rec_;
    Side side_;
    int sign_;
    ManifoldSettings ms_;
    Eigen::Vector2d dir_;
};

/// Adaptive polyline of the branch up to iter_depth iterates.
ManifoldBranch globalize(const Model& m, const PeriodicOrbitRecord& rec, Side side, int sign,
                         const ManifoldSettings& ms, int iter_depth);

struct HomoclinicRecord {
    double E = 0.0;
    Channel channel = Channel::Pri;
    double coord = 0.0;            ///< xi0 (pri) or eta0 (sec)
    double phi = 0.0;              ///< splitting angle in [0, pi]
    double phi_oriented = 0.0;     ///< signed angle in (-pi, pi]
    double e_max = 0.0;                ///< over the section points of the excursion
    double i_min = 0.0, i_max = 0.0;   ///< [deg], section points and the periodic orbit at h = 0
    double e_max_flow = 0.0;           ///< over the continuous excursion
    double i_min_flow = 0.0, i_max_flow = 0.0;   ///< [deg], continuous excursion
    int n = 0;                     ///< iterates from the seed
    double u = 0.0;                ///< fundamental-domain parameter
    Side side = Side::Unstable;
    int sign = -1;
    double section_h = 0.0;
    PoincareState point;
    double axis_residual = 0.0;    ///< |axis coordinate| at the refined point
    Eigen::Vector3d tangent{0, 0, 0};
};

/// First crossing of the branch with the channel's symmetry axis
/// ({eta = 0, xi > 0} for pri, {xi = 0, eta > 0} for sec), refined in u to
/// |axis coordinate| < 1e-12. Throws NumericalError if none is found.
HomoclinicRecord find_homoclinic(const Model& m, const PeriodicOrbitRecord& rec, Channel ch,
                                 const ManifoldSettings& ms = {}, Side side = Side::Unstable);

/// Angle between the W^u tangent and its reflected image (the W^s tangent)
/// at the homoclinic point. Returns {phi in [0, pi], oriented angle}.
std::pair<double, double> splitting_angle(const Eigen::Vector2d& t_xi_eta, Channel ch);

/// The crossing of `prev` continued to the energy of `rec`: the same level
/// n is searched near prev.u with sampling step du, then refined. Much cheaper
/// than find_homoclinic for small energy steps.
HomoclinicRecord continue_homoclinic(const Model& m, const PeriodicOrbitRecord& rec,
                                     const HomoclinicRecord& prev, const ManifoldSettings& ms = {},
                                     double du = 0.02);

/// Eccentricity and inclination extremes along the homoclinic excursion,
/// both on the section {h = 0} and along the continuous flow.
void max_eccentricity(const Model& m, const PeriodicOrbitRecord& rec, HomoclinicRecord& h,
                      const ManifoldSettings& ms = {});

struct Tangency {
    double E = 0.0;                ///< midpoint of the final bracket
    double E_lo = 0.0, E_hi = 0.0;
    double phi_near = 0.0;         ///< |phi| of the first crossing at the transverse end
};

struct TangencyScanRow {
    double E = 0.0;
    std::optional<HomoclinicRecord> h;
    std::string error;
};

/// First-crossing data across an energy grid (parallel over energies).
std::vector<TangencyScanRow> scan_first_crossings(const Model& m, const std::vector<double>& E_grid,
                                                  Channel ch, const ManifoldSettings& ms = {},
                                                  int threads = 1);

/// Tangencies of the first crossing: jumps of the first axis crossing
/// between grid neighbours bracket a fold, which is bisected to dE < E_tol.
std::vector<Tangency> scan_tangencies(const Model& m, const std::vector<double>& E_grid, Channel ch,
                                      const ManifoldSettings& ms = {}, int threads = 1,
                                      double E_tol = 1e-10);

} // namespace secres
