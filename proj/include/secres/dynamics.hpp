// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/hamiltonians.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace secres {

struct FlowSettings {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    double max_step = 0.0;          ///< 0 = unlimited (units of the independent variable)
    double event_tol = 1e-13;       ///< section refinement tolerance in h
    long max_steps = 2'000'000;
};

/// d/dt (eta, Gamma, xi, h) = (-dH/dxi, -dH/dh, dH/deta, dH/dGamma).
std::array<double, 4> vf_physical(const PoincareState& s, const Model& m);

/// Vector field with h as independent variable. d_Gamma H_CP is negative on
/// the whole physical domain, so forward time corresponds to decreasing h.
struct ReparamField {
    double deta = 0.0, dGam = 0.0, dxi = 0.0;
    double dh = 1.0;
    double dt = 0.0;        ///< 1 / d_Gamma H_CP
    double dOmega = 0.0;    ///< n_OmegaM / d_Gamma H_CP
};
ReparamField vf_reparam(const PoincareState& s, const Model& m);

/// Jacobian of vf_physical with respect to (eta, Gamma, xi, h).
Eigen::Matrix4d vf_jacobian(const PoincareState& s, const Model& m);

struct TimedState {
    PoincareState s;
    double t = 0.0;         ///< elapsed physical time (signed)
};

/// Called after every accepted step with the current point and elapsed time.
using StepObserver = std::function<void(const PoincareState&, double t)>;

/// Physical-time flow over a (signed) time T.
TimedState flow_time(const PoincareState& p, double T, const Model& m,
                     const FlowSettings& fs = {});

/// Flow until h reaches h_end, integrating with h as independent variable.
/// Throws NumericalError if d_Gamma H_CP vanishes on the way.
TimedState flow_to_h(const PoincareState& p, double h_end, const Model& m,
                     const FlowSettings& fs = {}, const StepObserver& obs = {});

/// First return to {h = h0 mod 2 pi} in forward time (direction = +1, h
/// decreases by 2 pi) or backward time (direction = -1).
TimedState poincare_map(const PoincareState& p, const Model& m,
                        const FlowSettings& fs = {}, int direction = +1);

/// Same return map computed with the physical-time vector field and a
/// section event refined on the step to |h - h_target| < event_tol.
TimedState poincare_map_physical(const PoincareState& p, const Model& m,
                                 const FlowSettings& fs = {});

struct TangentState {
    PoincareState base;
    Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
    double t = 0.0;
};

/// State plus first-variational system in physical time.
TangentState variational_flow(const PoincareState& p0, const Eigen::Matrix4d& M0, double T,
                              const Model& m, const FlowSettings& fs = {});

/// Derivative of the h-parametrized flow from h0 to h_end with respect to
/// the initial (eta, Gamma, xi); the fourth row holds d t / d(eta, Gamma, xi).
struct SectionTangent {
    TimedState end;
    Eigen::Matrix<double, 4, 3> D;
};
SectionTangent variational_section(const PoincareState& p0, double h_end, const Model& m,
                                   const FlowSettings& fs = {});

/// Perturbed flow H = H_CP + i_M alpha^3 R1(., Omega_M), Omega_M = Omega0 + n t,
/// integrated in h; J obeys dJ/dt = -dH/dOmega_M.
ExtendedState flow_extended_to_h(const ExtendedState& x, double iM, double h_end,
                                 const Model& m, const FlowSettings& fs = {},
                                 double* elapsed = nullptr);

/// Gamma such that H_CP(eta, Gamma, xi, h) = E, by safeguarded Newton in
/// [lo, hi]. Throws NumericalError if not bracketed or not converged.
double recover_gamma(double eta, double xi, double h, double E, const Model& m,
                     double guess, double lo = 0.0, double hi = 0.49);

/// The coplanar reversing involutions.
inline PoincareState phi_h(const PoincareState& s) { return {-s.eta, s.Gam, s.xi, -s.h}; }
inline PoincareState phi_v(const PoincareState& s) { return {s.eta, s.Gam, -s.xi, -s.h}; }

} // namespace secres
