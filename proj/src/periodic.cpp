// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/periodic.hpp"
#include "secres/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace secres {

namespace {

constexpr double kPi = std::numbers::pi;

double bisect(const std::function<double(double)>& f, double a, double b, double tol)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0) == (fb < 0)) throw NumericalError("bisection: root not bracketed");
    while (b - a > tol) {
        const double c = 0.5 * (a + b), fc = f(c);
        if (fc == 0.0) return c;
        if ((fc < 0) == (fa < 0)) { a = c; fa = fc; } else { b = c; fb = fc; }
    }
    return 0.5 * (a + b);
}

} // namespace

double energy_E2(const Model& m) { return eval_Hcp({0.0, 0.0, 0.0, 0.0}, m); }

double energy_E1(const Model& m) { return eval_Hcp({0.0, 0.49 * m.L(), 0.0, kPi}, m); }

double periodic_gamma0(double E, const Model& m)
{
    const double lo = 0.0, hi = 0.49 * m.L();
    auto f = [&](double G) { return eval_Hcp({0.0, G, 0.0, 0.0}, m) - E; };
    if (f(lo) * f(hi) > 0.0)
        throw DomainError("solve_periodic: energy outside the circular family at h = 0");
    // Coarse bisection then Newton polish.
    double G = bisect(f, lo, hi, 1e-6);
    for (int it = 0; it < 30; ++it) {
        const Derivs d = derivs_Hcp({0.0, G, 0.0, 0.0}, m, 1);
        const double step = (d.v - E) / d.g[kGam];
        G -= step;
        if (std::abs(step) < 1e-16) break;
    }
    if (!(G >= lo - 1e-12 && G <= hi) || std::abs(f(G)) > 1e-14)
        throw NumericalError("solve_periodic: Newton did not converge for Gamma0");
    return G;
}

double periodic_period(double E, const Model& m, const FlowSettings& fs)
{
    const double G0 = periodic_gamma0(E, m);
    const TimedState r = flow_to_h({0.0, G0, 0.0, 0.0}, -2.0 * kPi, m, fs);
    return r.t;
}

PeriodicOrbitRecord solve_periodic(double E, const Model& m, const FlowSettings& fs)
{
    if (!(E >= energy_E1(m) && E <= energy_E2(m)))
        throw DomainError("solve_periodic: E outside [E1, E2]");
    PeriodicOrbitRecord rec;
    rec.E = E;
    rec.Gam0 = periodic_gamma0(E, m);
    const PoincareState p0{0.0, rec.Gam0, 0.0, 0.0};

    double imin = 10.0, imax = -10.0;
    const TimedState ret = flow_to_h(p0, -2.0 * kPi, m, fs, [&](const PoincareState& s, double) {
        const double i = osculating_elements(s, m.L()).i;
        imin = std::min(imin, i);
        imax = std::max(imax, i);
    });
    rec.T0 = ret.t;
    rec.i_min = imin;
    rec.i_max = imax;
    rec.i_section = osculating_elements(p0, m.L()).i;
    rec.T0_physical = poincare_map_physical(p0, m, fs).t;

    const TangentState ts = variational_flow(p0, Eigen::Matrix4d::Identity(), rec.T0, m, fs);
    rec.monodromy = ts.M;

    // Transverse block in (xi, eta) order.
    Eigen::Matrix2d B;
    B << ts.M(2, 2), ts.M(2, 0),
         ts.M(0, 2), ts.M(0, 0);
    const double tr = B.trace(), det = B.determinant();
    const double disc = tr * tr / 4.0 - det;
    if (disc > 0.0 && std::abs(tr) > 2.0) {
        rec.kind = OrbitKind::Hyperbolic;
        const double s = std::sqrt(disc);
        const double l1 = tr / 2.0 + (tr > 0 ? s : -s);
        const double l2 = det / l1;
        rec.lambda_mult = std::abs(l1);
        rec.exponent = std::log(rec.lambda_mult) / rec.T0;
        auto evec = [&](double l) {
            Eigen::Vector2d v;
            // (B - l I) v = 0, pick the better conditioned row.
            const double a = B(0, 0) - l, b = B(0, 1), c = B(1, 0), d = B(1, 1) - l;
            if (std::hypot(a, b) > std::hypot(c, d)) v << -b, a; else v << -d, c;
            v.normalize();
            if (v(1) < 0.0 || (v(1) == 0.0 && v(0) < 0.0)) v = -v;
            return v;
        };
        rec.evec_u = evec(l1);
        rec.evec_s = evec(l2);
    } else {
        rec.kind = OrbitKind::Elliptic;
        rec.lambda_mult = 1.0;
        rec.exponent = 0.0;
    }
    return rec;
}

std::vector<PeriodicScanRow> scan_periodic(const std::vector<double>& E_grid, const Model& m,
                                           const FlowSettings& fs, int threads)
{
    std::vector<PeriodicScanRow> rows(E_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < E_grid.size();) {
            rows[k].E = E_grid[k];
            try {
                rows[k].rec = solve_periodic(E_grid[k], m, fs);
            } catch (const std::exception& e) {
                rows[k].error = e.what();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(E_grid.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

ResonanceLocation find_Jres(const Model& m, const FlowSettings& fs, double E_lo, double E_hi)
{
    const double n = m.n();
    auto g = [&](double E) { return n * periodic_period(E, m, fs) - 4.0 * kPi; };
    double a = E_lo, b = E_hi, ga = g(a), gb = g(b);
    if ((ga < 0) == (gb < 0)) throw NumericalError("find_Jres: n T0 - 4 pi not bracketed");
    double c = 0.5 * (a + b), gc = g(c);
    for (int it = 0; it < 200 && std::abs(gc) >= 1e-10; ++it) {
        // Regula falsi with Illinois damping.
        c = b - gb * (b - a) / (gb - ga);
        gc = g(c);
        if ((gc < 0) == (gb < 0)) { ga *= 0.5; } else { a = b; ga = gb; }
        b = c; gb = gc;
    }
    if (std::abs(gc) >= 1e-10) throw NumericalError("find_Jres: no convergence");
    return {-c / n, c};
}

AveragedEquilibrium classify_averaged(double Gam, const Model& m)
{
    if (!(Gam > 0.0 && Gam < m.L() / 2.0))
        throw DomainError("classify_averaged: Gamma outside (0, L/2)");
    const Derivs d = derivs_Hav(0.0, Gam, 0.0, m, 2);
    const double hee = d.H[kEta][kEta], hxx = d.H[kXi][kXi], hex = d.H[kEta][kXi];
    AveragedEquilibrium r;
    r.Gam = Gam;
    r.eigsq = hex * hex - hee * hxx;
    r.kind = r.eigsq > 0.0 ? EquilibriumKind::Saddle
           : r.eigsq < 0.0 ? EquilibriumKind::Center
                           : EquilibriumKind::Degenerate;
    return r;
}

AveragedThresholds find_Gamma12(const Model& m)
{
    const double L = m.L();
    const double mres = (-4.0 + std::sqrt(21.0)) / 5.0;
    auto hess = [&](double G, int k) { return derivs_Hav(0.0, G, 0.0, m, 2).H[k][k]; };
    // Locate the sign change of either diagonal entry inside an interval.
    auto root_in = [&](double a, double b) {
        const int N = 400;
        for (int k : {kEta, kXi}) {
            double x0 = a + (b - a) * 1e-6, f0 = hess(x0, k);
            for (int j = 1; j <= N; ++j) {
                const double x1 = a + (b - a) * (j / double(N)) * (1.0 - 1e-6);
                const double f1 = hess(x1, k);
                if ((f0 < 0) != (f1 < 0))
                    return bisect([&](double G) { return hess(G, k); }, x0, x1, 1e-15);
                x0 = x1; f0 = f1;
            }
        }
        throw NumericalError("find_Gamma12: root not bracketed");
    };
    AveragedThresholds t;
    t.Gam1 = root_in(0.0, mres * L / 2.0);
    t.Gam2 = root_in(mres * L / 2.0, L / 2.0);
    t.E1_av = eval_Hav(0.0, t.Gam1, 0.0, m);
    t.E2_av = eval_Hav(0.0, t.Gam2, 0.0, m);
    return t;
}

} // namespace secres
