// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/hamiltonians.hpp"
#include "jet.hpp"

#include <cmath>

namespace secres {

using detail::D4;
using detail::Jet2;

GiacagliaTable giacaglia_printed()
{
    GiacagliaTable t;
    t(0, 0) = 0.762646;  t(0, -1) = 0.364961; t(0, 1) = 0.364961;
    t(0, -2) = 0.039558; t(0, 2) = 0.039558;
    t(1, 0) = 0.547442;  t(1, -1) = 0.116974; t(1, 1) = 0.800502;
    t(1, -2) = 0.008206; t(1, 2) = -0.190687;
    t(2, 0) = 0.237353;  t(2, -1) = 0.032826; t(2, 1) = 0.762750;
    t(2, -2) = 0.001702; t(2, 2) = 0.919179;
    return t;
}

GiacagliaTable giacaglia_closed_form(double eps)
{
    const double C = std::cos(eps / 2), S = std::sin(eps / 2);
    const double C2 = C * C, C4 = C2 * C2, C6 = C4 * C2;
    const double q = C2 - 1.0;
    GiacagliaTable t;
    t(0, 0) = 1 - 6 * C2 + 6 * C4;
    t(0, -1) = -2 * C / S * (2 * C4 - 3 * C2 + 1);
    t(0, 1) = -2 * C * S * (1 - 2 * C2);
    t(0, -2) = C2 / (S * S) * q * q;
    t(0, 2) = C2 * S * S;
    t(1, 0) = -3 * C / S * (2 * C4 - 3 * C2 + 1);
    t(1, -1) = (4 * C6 - 9 * C4 + 6 * C2 - 1) / (S * S);
    t(1, 1) = C2 * (4 * C2 - 3);
    t(1, -2) = -C / (S * S * S) * q * q * q;
    t(1, 2) = -C2 * C * S;
    t(2, 0) = 6 * C2 / (S * S) * q * q;
    t(2, -1) = -4 * C / (S * S * S) * q * q * q;
    t(2, 1) = -4 * C2 * C / S * q;
    t(2, -2) = q * q * q * q / (S * S * S * S);
    t(2, 2) = C4;
    return t;
}

HarmonicCoeffs make_harmonic_coeffs(const GiacagliaTable& U)
{
    HarmonicCoeffs c;
    const std::complex<double> I(0.0, 1.0);
    for (int m = 0; m < 3; ++m) {
        const double ch = c.c_hat[m];
        c.f0[m] = ch * U(m, 0);
        c.fcos[m] = ch * (U(m, 1) - U(m, -1));
        c.fsin[m] = ch * (U(m, 1) + U(m, -1));
        c.fplus[m] = ch / 2.0 * ((1.0 - I) * U(m, 1) - (1.0 + I) * U(m, -1));
        c.fminus[m] = ch / 2.0 * ((1.0 + I) * U(m, 1) - (1.0 - I) * U(m, -1));
    }
    return c;
}

double KaulaInclination::F(int s, double iM)
{
    const double si = std::sin(iM), ci = std::cos(iM);
    switch (s) {
    case 0: return -0.5 + 0.75 * si * si;
    case 1: return -1.5 * si * ci;
    case 2: return 1.5 * si * si;
    default: throw DomainError("Kaula inclination index must be 0, 1 or 2");
    }
}

Model::Model(const ModelParams& p, R1Structure r1) : p_(p), r1_(r1)
{
    constexpr double kPrintedEpsDeg = 23.44;
    if (p.raw.giacaglia == "printed" && std::abs(p.raw.eps_deg - kPrintedEpsDeg) < 1e-12)
        U_ = giacaglia_printed();
    else
        U_ = giacaglia_closed_form(p.eps);
    c_ = make_harmonic_coeffs(U_);
}

namespace {

/// The nine Table-4 coefficient functions D_{m,p}(M, Gamma) as jets.
struct CoeffJets {
    Jet2 D[3][3];
    Jet2 W;          // 8L^2 + 12 L M - 3 M^2
};

CoeffJets coefficient_jets(double M, double Gam, double L, int order)
{
    if (!(M < 2.0 * L)) throw DomainError("xi^2 + eta^2 must stay below 2L (e < 1)");
    const Jet2 Mj = Jet2::M(M), Gj = Jet2::Gam(Gam);
    const Jet2 K = 2.0 * L + (-1.0) * Mj;                 // 2L - M
    const Jet2 A = K - 4.0 * Gj;                           // 2L - M - 4 Gamma
    const Jet2 B = 6.0 * L + ((-3.0) * Mj + 4.0 * Gj);     // 6L - 3M + 4 Gamma
    const Jet2 Q = 4.0 * L + (-1.0) * Mj;                  // 4L - M
    if (A.v < 0.0 || B.v < 0.0)
        throw DomainError("negative square-root argument in coefficient function");
    const Jet2 pre = (1.0 / (L * L)) * detail::pow(K, -2.0, order);

    CoeffJets c;
    const Jet2 ABQ = A * B * Q;
    c.D[0][0] = (-15.0 / 128.0) * (pre * ABQ);
    c.D[0][2] = c.D[0][0];
    c.D[0][1] = (1.0 / 128.0) * (pre * (K * K - 24.0 * (K * Gj) - 48.0 * (Gj * Gj)));

    const Jet2 sA = detail::pow(A, 0.5, order);
    const Jet2 sB = detail::pow(B, 0.5, order);
    c.D[1][0] = (15.0 / 64.0) * (pre * (sA * (B * sB) * Q));
    c.D[1][1] = (-3.0 / 64.0) * (pre * (sA * sB * (K + 4.0 * Gj)));
    c.D[1][2] = (-15.0 / 64.0) * (pre * ((A * sA) * sB * Q));

    c.D[2][0] = (15.0 / 64.0) * (pre * (B * B * Q));
    c.D[2][1] = (3.0 / 64.0) * (pre * (A * B));
    c.D[2][2] = (15.0 / 64.0) * (pre * (A * A * Q));

    c.W = 8.0 * L * L + (12.0 * L) * Mj - 3.0 * (Mj * Mj);
    return c;
}

D4 trig(double h, int k, bool cosine, int order)
{
    D4 r;
    const double c = std::cos(k * h), s = std::sin(k * h);
    r.v = cosine ? c : s;
    if (order < 1) return r;
    r.g[kH] = cosine ? -k * s : k * c;
    if (order < 2) return r;
    r.H[kH][kH] = -double(k * k) * r.v;
    return r;
}

/// Sum over m of f_m times the three p-blocks of the Poincare form.
/// `sin_structure` selects the sin(psi) companion of each block.
D4 block_sum(const PoincareState& s, double L, const std::array<double, 3>& f,
             bool sin_structure, int order)
{
    const CoeffJets cj = coefficient_jets(s.M(), s.Gam, L, order);

    D4 a, b;  // a = (xi^2 - eta^2)/2, b = xi eta
    a.v = 0.5 * (s.xi * s.xi - s.eta * s.eta);
    b.v = s.xi * s.eta;
    if (order >= 1) {
        a.g[kEta] = -s.eta; a.g[kXi] = s.xi;
        b.g[kEta] = s.xi;   b.g[kXi] = s.eta;
    }
    if (order >= 2) {
        a.H[kEta][kEta] = -1.0; a.H[kXi][kXi] = 1.0;
        b.H[kEta][kXi] = b.H[kXi][kEta] = 1.0;
    }

    // cos structure: a cos(kh) + b sin(kh); sin structure: b cos(kh) - a sin(kh).
    auto P = [&](int k) {
        const D4 ck = trig(s.h, k, true, order), sk = trig(s.h, k, false, order);
        if (!sin_structure) return mul(a, ck, order) + mul(b, sk, order);
        return mul(b, ck, order) + scale(-1.0, mul(a, sk, order));
    };

    D4 total;
    for (int m = 0; m < 3; ++m) {
        if (f[m] == 0.0) continue;
        const D4 d0 = detail::lift(cj.D[m][0], s.eta, s.xi, order);
        const D4 d1 = detail::lift(cj.D[m][1] * cj.W, s.eta, s.xi, order);
        const D4 d2 = detail::lift(cj.D[m][2], s.eta, s.xi, order);
        const double sign2 = sin_structure ? -1.0 : 1.0;
        D4 term = mul(d0, P(1 - m), order)
                + mul(d1, trig(s.h, m, !sin_structure, order), order)
                + scale(sign2, mul(d2, P(1 + m), order));
        total = total + scale(f[m], term);
    }
    return total;
}

Derivs to_derivs(const D4& d)
{
    return {d.v, d.g, d.H};
}

D4 h0_jet(const PoincareState& s, const Model& m, int order)
{
    const double L = m.L();
    if (!(s.M() < 2.0 * L)) throw DomainError("xi^2 + eta^2 must stay below 2L (e < 1)");
    const Jet2 Mj = Jet2::M(s.M()), Gj = Jet2::Gam(s.Gam);
    const Jet2 K = 2.0 * L + (-1.0) * Mj;
    const Jet2 num = K * K - 24.0 * (K * Gj) - 48.0 * (Gj * Gj);
    const Jet2 H0 = (m.params().rho0 / (2.0 * L * L * L)) * (num * detail::pow(K, -5.0, order));
    return detail::lift(H0, s.eta, s.xi, order);
}

D4 hcp1_jet(const PoincareState& s, const Model& m, int order)
{
    const double L = m.L();
    return scale(m.params().rho1 / (L * L), block_sum(s, L, m.coeffs().f0, false, order));
}

} // namespace

double eval_H0(const PoincareState& s, const Model& m) { return h0_jet(s, m, 0).v; }

double eval_Hcp1(const PoincareState& s, const Model& m) { return hcp1_jet(s, m, 0).v; }

double eval_Hcp(const PoincareState& s, const Model& m)
{
    return eval_H0(s, m) + m.alpha3() * eval_Hcp1(s, m);
}

Derivs derivs_Hcp(const PoincareState& s, const Model& m, int order)
{
    return to_derivs(h0_jet(s, m, order) + scale(m.alpha3(), hcp1_jet(s, m, order)));
}

std::array<double, 4> grad_Hcp(const PoincareState& s, const Model& m)
{
    return derivs_Hcp(s, m, 1).g;
}

Derivs derivs_Hav(double eta, double Gam, double xi, const Model& m, int order)
{
    // Only the h-independent harmonics survive the average: the m = 0 block of
    // the p = 1 line and the m = 1 block of the p = 0 line (cos((1-m)h) = 1).
    const PoincareState s{eta, Gam, xi, 0.0};
    const double L = m.L();
    const CoeffJets cj = coefficient_jets(s.M(), Gam, L, order);
    const auto& f0 = m.coeffs().f0;
    D4 a;
    a.v = 0.5 * (xi * xi - eta * eta);
    if (order >= 1) { a.g[kEta] = -eta; a.g[kXi] = xi; }
    if (order >= 2) { a.H[kEta][kEta] = -1.0; a.H[kXi][kXi] = 1.0; }
    const D4 t01 = detail::lift(cj.D[0][1] * cj.W, eta, xi, order);
    const D4 t10 = mul(detail::lift(cj.D[1][0], eta, xi, order), a, order);
    const D4 avg = scale(f0[0], t01) + scale(f0[1], t10);
    return to_derivs(h0_jet(s, m, order) + scale(m.alpha3() * m.params().rho1 / (L * L), avg));
}

double eval_Hav(double eta, double Gam, double xi, const Model& m)
{
    return derivs_Hav(eta, Gam, xi, m, 0).v;
}

Derivs derivs_Rcos(const PoincareState& s, const Model& m, int order)
{
    const double L = m.L();
    return to_derivs(scale(1.5 * m.params().rho1 / (L * L),
                           block_sum(s, L, m.coeffs().fcos, false, order)));
}

Derivs derivs_Rsin(const PoincareState& s, const Model& m, int order)
{
    const double L = m.L();
    const bool sin_structure = m.r1_structure() == R1Structure::SlowFastConsistent;
    return to_derivs(scale(1.5 * m.params().rho1 / (L * L),
                           block_sum(s, L, m.coeffs().fsin, sin_structure, order)));
}

std::pair<std::complex<double>, std::complex<double>>
eval_R1pm(const PoincareState& s, const Model& m)
{
    const double rc = derivs_Rcos(s, m, 0).v;
    const double rs = derivs_Rsin(s, m, 0).v;
    const std::complex<double> plus(0.5 * rc, -0.5 * rs);
    return {plus, std::conj(plus)};
}

double eval_R1(const PoincareState& s, double OmegaM, const Model& m)
{
    return std::cos(OmegaM) * derivs_Rcos(s, m, 0).v + std::sin(OmegaM) * derivs_Rsin(s, m, 0).v;
}

double eval_H0_slowfast(double y, double Gam, const Model& m)
{
    const double L = m.L();
    return m.params().rho0 * (y * y - 6 * y * Gam - 3 * Gam * Gam)
         / (128.0 * L * L * L * std::pow(y, 5));
}

double eval_Hcp1_slowfast(const SlowFastState& s, const Model& m)
{
    const double L = m.L(), y = s.y, G = s.Gam;
    if (!(y > 0.0)) throw DomainError("slow-fast action y must be positive");
    const double q = (y - G) * (3 * y + G);
    if (q < 0.0) throw DomainError("negative square-root argument in coefficient function");
    const double pre = 1.0 / (L * L * y * y);
    const double R = (L - 2 * y) * (L + 2 * y);
    const double S = 5 * L * L - 12 * y * y;
    const double sq = std::sqrt(q);
    double D[3][3];
    D[0][0] = -15.0 / 64.0 * pre * q * R;
    D[0][1] = 1.0 / 32.0 * pre * (y * y - 6 * G * y - 3 * G * G) * S;
    D[0][2] = D[0][0];
    D[1][0] = 15.0 / 32.0 * pre * sq * (3 * y + G) * R;
    D[1][1] = -3.0 / 16.0 * pre * sq * (G + y) * S;
    D[1][2] = -15.0 / 32.0 * pre * sq * (y - G) * R;
    D[2][0] = 15.0 / 32.0 * pre * (3 * y + G) * (3 * y + G) * R;
    D[2][1] = 3.0 / 16.0 * pre * q * S;
    D[2][2] = 15.0 / 32.0 * pre * (y - G) * (y - G) * R;
    double sum = 0.0;
    for (int mm = 0; mm < 3; ++mm)
        for (int p = 0; p < 3; ++p) {
            const double psi = (1 - p) * s.x - (1 - p - mm) * s.h;
            sum += m.coeffs().f0[mm] * D[mm][p] * std::cos(psi);
        }
    return m.params().rho1 / (L * L) * sum;
}

double dGam_H0_plane(double Gam, const Model& m)
{
    const double L = m.L();
    return -3.0 * m.params().rho0 * (L + 2 * Gam) / (4.0 * std::pow(L, 8));
}

double dGam_Hcp1_plane(double Gam, double h, const Model& m)
{
    const double L = m.L();
    const auto& U = m.giacaglia();
    const double r = std::sqrt((L - 2 * Gam) * (3 * L + 2 * Gam));
    return -m.params().rho1 / (8.0 * std::pow(L, 4))
         * (3 * U(0, 0) * (L + 2 * Gam)
            + 4 * U(1, 0) * (L * L - 4 * L * Gam - 4 * Gam * Gam) / r * std::cos(h)
            - U(2, 0) * (L + 2 * Gam) * std::cos(2 * h));
}

double dh_Hcp1_plane(double Gam, double h, const Model& m)
{
    const double L = m.L();
    const auto& U = m.giacaglia();
    const double r2 = (L - 2 * Gam) * (3 * L + 2 * Gam);
    return m.params().rho1 / (16.0 * std::pow(L, 4))
         * (2 * U(1, 0) * std::sqrt(r2) * (2 * Gam + L) * std::sin(h)
            + U(2, 0) * r2 * std::sin(2 * h));
}

} // namespace secres
