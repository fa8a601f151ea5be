// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/coords.hpp"
#include "secres/errors.hpp"

#include <cmath>
#include <numbers>

namespace secres {

double wrap_angle(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

SlowFastState delaunay_to_slowfast(const DelaunayState& d)
{
    SlowFastState s;
    s.x = wrap_angle(2.0 * d.g + d.h);
    s.y = d.G / 2.0;
    s.Gam = d.H - d.G / 2.0;
    s.h = d.h;
    return s;
}

DelaunayState slowfast_to_delaunay(const SlowFastState& s, double Ld, double l)
{
    DelaunayState d;
    d.Ld = Ld;
    d.l = l;
    d.G = 2.0 * s.y;
    d.H = s.Gam + s.y;
    d.h = s.h;
    d.g = std::fmod(wrap_angle(s.x - s.h) / 2.0, std::numbers::pi);
    return d;
}

PoincareState slowfast_to_poincare(const SlowFastState& s, double L)
{
    if (s.y > L / 2.0) throw DomainError("slow-fast action y exceeds L/2");
    const double r = std::sqrt(2.0 * L - 4.0 * s.y);
    return {r * std::sin(s.x / 2.0), s.Gam, r * std::cos(s.x / 2.0), s.h};
}

SlowFastState poincare_to_slowfast(const PoincareState& p, double L)
{
    SlowFastState s;
    s.y = (2.0 * L - p.M()) / 4.0;
    s.Gam = p.Gam;
    s.h = p.h;
    if (p.xi == 0.0 && p.eta == 0.0) {
        s.x = 0.0;
        s.x_undefined = true;
    } else {
        s.x = wrap_angle(2.0 * std::atan2(p.eta, p.xi));
    }
    return s;
}

OsculatingElements osculating_elements(const PoincareState& p, double L)
{
    const double M = p.M();
    if (!(M < 2.0 * L)) throw DomainError("xi^2 + eta^2 must stay below 2L (e < 1)");
    const double G = (2.0 * L - M) / 2.0;
    const double H = p.Gam + G / 2.0;
    if (std::abs(H) > G) throw DomainError("|H| > G: no real inclination");
    const double ratio = G / L;
    OsculatingElements el;
    el.e = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    el.i = std::acos(H / G);
    return el;
}

double resonance_inclination_prograde()
{
    return std::acos((1.0 + std::sqrt(21.0)) / 10.0);
}

double resonance_inclination_retrograde()
{
    return std::acos((1.0 - std::sqrt(21.0)) / 10.0);
}

double resonance_slope()
{
    return (-4.0 + std::sqrt(21.0)) / 5.0;
}

} // namespace secres
