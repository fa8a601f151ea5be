// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

// Phase-space types and the coordinate chain
//   Delaunay (L,G,H,l,g,h) -> slow-fast (y,Gamma,x,h) -> Poincare (eta,Gamma,xi,h).

namespace secres {

struct DelaunayState {
    double Ld = 1.0;
    double G = 1.0;
    double H = 0.0;
    double l = 0.0;
    double g = 0.0;
    double h = 0.0;
};

struct SlowFastState {
    double y = 0.5;
    double Gam = 0.0;
    double x = 0.0;
    double h = 0.0;
    /// Set by poincare_to_slowfast at xi = eta = 0, where x is undefined
    /// and returned as 0.
    bool x_undefined = false;
};

struct PoincareState {
    double eta = 0.0;
    double Gam = 0.0;
    double xi = 0.0;
    double h = 0.0;

    double M() const { return xi * xi + eta * eta; }
};

/// Coplanar state extended by the lunar node Omega_M and its conjugate J.
struct ExtendedState {
    double eta = 0.0;
    double Gam = 0.0;
    double J = 0.0;
    double xi = 0.0;
    double h = 0.0;
    double OmegaM = 0.0;

    PoincareState base() const { return {eta, Gam, xi, h}; }
};

struct OsculatingElements {
    double e = 0.0;
    double i = 0.0;      ///< inclination [rad]
};

/// Canonical representative of an angle in [0, 2 pi).
double wrap_angle(double a);

SlowFastState delaunay_to_slowfast(const DelaunayState& d);
/// Inverse map. Ld and l are not encoded in slow-fast variables and are
/// passed through; g is recovered in [0, pi) modulo the 2g ambiguity.
DelaunayState slowfast_to_delaunay(const SlowFastState& s, double Ld, double l = 0.0);

/// Throws DomainError when y > L/2 (G > L).
PoincareState slowfast_to_poincare(const SlowFastState& s, double L);
/// x is returned in [0, 2 pi) with the half-angle branch x/2 = atan2(eta, xi)
/// taken in [0, pi); x_undefined is set at the circular point.
SlowFastState poincare_to_slowfast(const PoincareState& p, double L);

/// e = sqrt(1 - (G/L)^2), i = arccos(H/G) with G = (2L - M)/2, H = Gamma + G/2.
/// Throws DomainError when M >= 2L or |H| > G.
OsculatingElements osculating_elements(const PoincareState& p, double L);

/// Inclination of the exact 2g+h resonance, cos i = (+-1 + sqrt 21)/10
/// (prograde: +1, retrograde: -1 with the other root of the quadratic).
double resonance_inclination_prograde();
double resonance_inclination_retrograde();

/// Gamma / y on the prograde resonance line.
double resonance_slope();

} // namespace secres
