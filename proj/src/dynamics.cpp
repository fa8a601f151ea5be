// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/dynamics.hpp"
#include "integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace secres {

using detail::StateN;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<double, 4> field_from_grad(const std::array<double, 4>& g)
{
    return {-g[kXi], -g[kH], g[kEta], g[kGam]};
}

void check_rate(double hdot)
{
    if (!(std::abs(hdot) > 0.0) || !std::isfinite(hdot))
        throw NumericalError("reparametrization breakdown: d_Gamma H_CP vanished");
}

} // namespace

std::array<double, 4> vf_physical(const PoincareState& s, const Model& m)
{
    return field_from_grad(grad_Hcp(s, m));
}

ReparamField vf_reparam(const PoincareState& s, const Model& m)
{
    const auto X = vf_physical(s, m);
    check_rate(X[3]);
    ReparamField r;
    const double inv = 1.0 / X[3];
    r.deta = X[0] * inv;
    r.dGam = X[1] * inv;
    r.dxi = X[2] * inv;
    r.dt = inv;
    r.dOmega = m.n() * inv;
    return r;
}

Eigen::Matrix4d vf_jacobian(const PoincareState& s, const Model& m)
{
    const Derivs d = derivs_Hcp(s, m, 2);
    // Rows: d/dt of (eta, Gamma, xi, h) = (-H_xi, -H_h, H_eta, H_Gamma).
    const int src[4] = {kXi, kH, kEta, kGam};
    const double sgn[4] = {-1.0, -1.0, 1.0, 1.0};
    Eigen::Matrix4d A;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A(i, j) = sgn[i] * d.H[src[i]][j];
    return A;
}

TimedState flow_time(const PoincareState& p, double T, const Model& m, const FlowSettings& fs)
{
    StateN<4> x{p.eta, p.Gam, p.xi, p.h};
    auto rhs = [&m](const StateN<4>& y, StateN<4>& dy, double) {
        dy = vf_physical({y[0], y[1], y[2], y[3]}, m);
    };
    detail::integrate<4>(rhs, x, 0.0, T, fs);
    return {{x[0], x[1], x[2], x[3]}, T};
}

TimedState flow_to_h(const PoincareState& p, double h_end, const Model& m,
                     const FlowSettings& fs, const StepObserver& obs)
{
    StateN<4> x{p.eta, p.Gam, p.xi, 0.0};
    auto rhs = [&m](const StateN<4>& y, StateN<4>& dy, double h) {
        const ReparamField f = vf_reparam({y[0], y[1], y[2], h}, m);
        dy = {f.deta, f.dGam, f.dxi, f.dt};
    };
    if (obs) {
        obs(p, 0.0);
        detail::integrate<4>(rhs, x, p.h, h_end, fs,
                             [&](const StateN<4>&, double, const StateN<4>& y, double h) {
                                 obs({y[0], y[1], y[2], h}, y[3]);
                                 return false;
                             });
    } else {
        detail::integrate<4>(rhs, x, p.h, h_end, fs);
    }
    return {{x[0], x[1], x[2], h_end}, x[3]};
}

TimedState poincare_map(const PoincareState& p, const Model& m, const FlowSettings& fs,
                        int direction)
{
    // Forward time runs towards decreasing h.
    const double h_end = p.h - direction * kTwoPi;
    TimedState r = flow_to_h(p, h_end, m, fs);
    r.s.h = p.h;
    return r;
}

TimedState poincare_map_physical(const PoincareState& p, const Model& m, const FlowSettings& fs)
{
    const double hdot = vf_physical(p, m)[3];
    check_rate(hdot);
    const double target = p.h + (hdot > 0 ? kTwoPi : -kTwoPi);
    auto rhs = [&m](const StateN<4>& y, StateN<4>& dy, double) {
        dy = vf_physical({y[0], y[1], y[2], y[3]}, m);
    };
    // Generous time budget: 4x a crude period estimate.
    const double tmax = 4.0 * kTwoPi / std::abs(hdot);
    StateN<4> x{p.eta, p.Gam, p.xi, p.h};
    bool found = false;
    StateN<4> hit{};
    double t_hit = 0.0;
    detail::integrate<4>(rhs, x, 0.0, tmax, fs,
        [&](const StateN<4>& xp, double tp, const StateN<4>& xn, double tn) {
            const double gp = xp[3] - target, gn = xn[3] - target;
            if (gp == 0.0 || gp * gn > 0.0) return false;
            // Newton on the length of a single step from the last accepted point.
            double tau = (tn - tp) * gp / (gp - gn);
            StateN<4> y = xn;
            for (int it = 0; it < 50; ++it) {
                y = detail::single_step<4>(rhs, xp, tp, tau);
                const double g = y[3] - target;
                if (std::abs(g) < fs.event_tol) break;
                tau -= g / vf_physical({y[0], y[1], y[2], y[3]}, m)[3];
            }
            hit = y;
            t_hit = tp + tau;
            found = true;
            return true;
        });
    if (!found) throw NumericalError("poincare_map_physical: no return to the section");
    return {{hit[0], hit[1], hit[2], p.h}, t_hit};
}

TangentState variational_flow(const PoincareState& p0, const Eigen::Matrix4d& M0, double T,
                              const Model& m, const FlowSettings& fs)
{
    StateN<20> x{};
    x[0] = p0.eta; x[1] = p0.Gam; x[2] = p0.xi; x[3] = p0.h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) x[4 + 4 * i + j] = M0(i, j);
    auto rhs = [&m](const StateN<20>& y, StateN<20>& dy, double) {
        const PoincareState s{y[0], y[1], y[2], y[3]};
        const auto X = vf_physical(s, m);
        const Eigen::Matrix4d A = vf_jacobian(s, m);
        for (int i = 0; i < 4; ++i) dy[i] = X[i];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += A(i, k) * y[4 + 4 * k + j];
                dy[4 + 4 * i + j] = acc;
            }
    };
    detail::integrate<20>(rhs, x, 0.0, T, fs);
    TangentState ts;
    ts.base = {x[0], x[1], x[2], x[3]};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ts.M(i, j) = x[4 + 4 * i + j];
    ts.t = T;
    return ts;
}

SectionTangent variational_section(const PoincareState& p0, double h_end, const Model& m,
                                   const FlowSettings& fs)
{
    // State: (eta, Gamma, xi, t) and the 4x3 derivative matrix.
    StateN<16> x{};
    x[0] = p0.eta; x[1] = p0.Gam; x[2] = p0.xi; x[3] = 0.0;
    for (int j = 0; j < 3; ++j) x[4 + 3 * j + j] = 1.0;
    auto rhs = [&m](const StateN<16>& y, StateN<16>& dy, double h) {
        const PoincareState s{y[0], y[1], y[2], h};
        const Derivs d = derivs_Hcp(s, m, 2);
        const double X[4] = {-d.g[kXi], -d.g[kH], d.g[kEta], d.g[kGam]};
        check_rate(X[3]);
        // dX/dz for z = (eta, Gamma, xi).
        const int src[4] = {kXi, kH, kEta, kGam};
        const double sgn[4] = {-1.0, -1.0, 1.0, 1.0};
        const int zi[3] = {kEta, kGam, kXi};
        double dX[4][3];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) dX[i][j] = sgn[i] * d.H[src[i]][zi[j]];
        const double inv = 1.0 / X[3];
        // F_i = X_i / X_h for i = eta, Gamma, xi; F_t = 1 / X_h.
        double dF[4][3];
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) dF[i][j] = (dX[i][j] - X[i] * inv * dX[3][j]) * inv;
            dF[3][j] = -dX[3][j] * inv * inv;
        }
        dy[0] = X[0] * inv; dy[1] = X[1] * inv; dy[2] = X[2] * inv; dy[3] = inv;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k) acc += dF[i][k] * y[4 + 3 * k + j];
                dy[4 + 3 * i + j] = acc;
            }
    };
    detail::integrate<16>(rhs, x, p0.h, h_end, fs);
    SectionTangent st;
    st.end = {{x[0], x[1], x[2], h_end}, x[3]};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) st.D(i, j) = x[4 + 3 * i + j];
    return st;
}

ExtendedState flow_extended_to_h(const ExtendedState& x0, double iM, double h_end,
                                 const Model& m, const FlowSettings& fs, double* elapsed)
{
    // State: (eta, Gamma, xi, J, t); Omega_M = Omega0 + n t.
    StateN<5> x{x0.eta, x0.Gam, x0.xi, x0.J, 0.0};
    const double a3 = m.alpha3(), n = m.n(), Om0 = x0.OmegaM;
    auto rhs = [&](const StateN<5>& y, StateN<5>& dy, double h) {
        const PoincareState s{y[0], y[1], y[2], h};
        const double Om = Om0 + n * y[4];
        const double c = std::cos(Om), sn = std::sin(Om);
        const Derivs H = derivs_Hcp(s, m, 1);
        std::array<double, 4> g = H.g;
        double dOm_R = 0.0;
        if (iM != 0.0) {
            const Derivs Rc = derivs_Rcos(s, m, 1), Rs = derivs_Rsin(s, m, 1);
            for (int k = 0; k < 4; ++k) g[k] += iM * a3 * (c * Rc.g[k] + sn * Rs.g[k]);
            dOm_R = iM * a3 * (-sn * Rc.v + c * Rs.v);
        }
        const double X[4] = {-g[kXi], -g[kH], g[kEta], g[kGam]};
        check_rate(X[3]);
        const double inv = 1.0 / X[3];
        dy = {X[0] * inv, X[1] * inv, X[2] * inv, -dOm_R * inv, inv};
    };
    detail::integrate<5>(rhs, x, x0.h, h_end, fs);
    if (elapsed) *elapsed = x[4];
    ExtendedState r;
    r.eta = x[0]; r.Gam = x[1]; r.xi = x[2]; r.J = x[3]; r.h = h_end;
    r.OmegaM = Om0 + n * x[4];
    return r;
}

double recover_gamma(double eta, double xi, double h, double E, const Model& m,
                     double guess, double lo, double hi)
{
    // Physical range: -G <= H <= G, i.e. -3y <= Gamma <= y with y = (2L - M)/4.
    const double y = (2.0 * m.L() - (xi * xi + eta * eta)) / 4.0;
    hi = std::min(hi, y * (1.0 - 1e-14));
    lo = std::max(lo, -3.0 * y * (1.0 - 1e-14));
    if (!(lo < hi)) throw NumericalError("recover_gamma: empty Gamma range");
    auto f = [&](double G) { return eval_Hcp({eta, G, xi, h}, m) - E; };
    double G = std::clamp(guess, lo, hi);
    for (int it = 0; it < 30; ++it) {
        const Derivs d = derivs_Hcp({eta, G, xi, h}, m, 1);
        const double r = d.v - E;
        const double step = r / d.g[kGam];
        double Gn = G - step;
        if (Gn < lo || Gn > hi || !std::isfinite(Gn)) break;
        G = Gn;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(G))) return G;
    }
    // Fallback: bisection on the bracket (H_CP is monotone in Gamma there).
    double a = lo, b = hi, fa = f(a), fb = f(b);
    if (fa * fb > 0.0) throw NumericalError("recover_gamma: energy not bracketed");
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double c = 0.5 * (a + b), fc = f(c);
        if ((fc < 0) == (fa < 0)) { a = c; fa = fc; } else { b = c; fb = fc; }
    }
    return 0.5 * (a + b);
}

} // namespace secres
