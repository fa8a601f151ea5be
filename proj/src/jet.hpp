// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

// Second-order jets used internally by the Hamiltonian evaluators.
//  * Jet2: a function of the two scalars (M, Gamma) with its first and
//    second partials.
//  * D4: a function of (eta, Gamma, xi, h) with gradient and Hessian.

#include "secres/errors.hpp"
#include "secres/hamiltonians.hpp"

#include <cmath>

namespace secres::detail {

struct Jet2 {
    double v = 0, m = 0, g = 0, mm = 0, mg = 0, gg = 0;

    static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Jet2 M(double M) { return {M, 1, 0, 0, 0, 0}; }
    static Jet2 Gam(double G) { return {G, 0, 1, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b)
{
    return {a.v + b.v, a.m + b.m, a.g + b.g, a.mm + b.mm, a.mg + b.mg, a.gg + b.gg};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b)
{
    return {a.v - b.v, a.m - b.m, a.g - b.g, a.mm - b.mm, a.mg - b.mg, a.gg - b.gg};
}
inline Jet2 operator*(double s, const Jet2& a)
{
    return {s * a.v, s * a.m, s * a.g, s * a.mm, s * a.mg, s * a.gg};
}
inline Jet2 operator+(double s, const Jet2& a) { return Jet2::constant(s) + a; }
inline Jet2 operator*(const Jet2& a, const Jet2& b)
{
    return {a.v * b.v,
            a.m * b.v + a.v * b.m,
            a.g * b.v + a.v * b.g,
            a.mm * b.v + 2 * a.m * b.m + a.v * b.mm,
            a.mg * b.v + a.m * b.g + a.g * b.m + a.v * b.mg,
            a.gg * b.v + 2 * a.g * b.g + a.v * b.gg};
}

/// phi(u) given phi, phi', phi'' at u.v.
inline Jet2 compose(const Jet2& u, double f0, double f1, double f2)
{
    return {f0,
            f1 * u.m,
            f1 * u.g,
            f2 * u.m * u.m + f1 * u.mm,
            f2 * u.m * u.g + f1 * u.mg,
            f2 * u.g * u.g + f1 * u.gg};
}

/// u^r for real r; u must be positive unless only the value is needed.
inline Jet2 pow(const Jet2& u, double r, int order)
{
    if (u.v < 0.0 || (order > 0 && u.v == 0.0))
        throw DomainError("negative square-root argument in coefficient function");
    if (order == 0) return Jet2::constant(std::pow(u.v, r));
    const double p = std::pow(u.v, r);
    return compose(u, p, r * p / u.v, r * (r - 1.0) * p / (u.v * u.v));
}

struct D4 {
    double v = 0.0;
    std::array<double, 4> g{};
    std::array<std::array<double, 4>, 4> H{};
};

inline D4 operator+(const D4& a, const D4& b)
{
    D4 r;
    r.v = a.v + b.v;
    for (int i = 0; i < 4; ++i) {
        r.g[i] = a.g[i] + b.g[i];
        for (int j = 0; j < 4; ++j) r.H[i][j] = a.H[i][j] + b.H[i][j];
    }
    return r;
}

inline D4 scale(double s, const D4& a)
{
    D4 r;
    r.v = s * a.v;
    for (int i = 0; i < 4; ++i) {
        r.g[i] = s * a.g[i];
        for (int j = 0; j < 4; ++j) r.H[i][j] = s * a.H[i][j];
    }
    return r;
}

inline D4 mul(const D4& a, const D4& b, int order)
{
    D4 r;
    r.v = a.v * b.v;
    if (order < 1) return r;
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    if (order < 2) return r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r.H[i][j] = a.H[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.H[i][j];
    return r;
}

/// Pulls a (M, Gamma) jet back to (eta, Gamma, xi, h) through M = xi^2 + eta^2.
inline D4 lift(const Jet2& G, double eta, double xi, int order)
{
    D4 r;
    r.v = G.v;
    if (order < 1) return r;
    r.g[kEta] = 2.0 * eta * G.m;
    r.g[kXi] = 2.0 * xi * G.m;
    r.g[kGam] = G.g;
    if (order < 2) return r;
    r.H[kEta][kEta] = 4.0 * eta * eta * G.mm + 2.0 * G.m;
    r.H[kXi][kXi] = 4.0 * xi * xi * G.mm + 2.0 * G.m;
    r.H[kEta][kXi] = r.H[kXi][kEta] = 4.0 * eta * xi * G.mm;
    r.H[kEta][kGam] = r.H[kGam][kEta] = 2.0 * eta * G.mg;
    r.H[kXi][kGam] = r.H[kGam][kXi] = 2.0 * xi * G.mg;
    r.H[kGam][kGam] = G.gg;
    return r;
}

} // namespace secres::detail
