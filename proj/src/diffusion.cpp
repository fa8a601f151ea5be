// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/diffusion.hpp"
#include "secres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

namespace secres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDeg = 180.0 / std::numbers::pi;
const cplx kI{0.0, 1.0};

// Worker chunk of the grid: anchored by a full search, then continued.
void fill_chunk(const Model& m, const TableSettings& ts, DiffusionTables& t, std::size_t k0,
                std::size_t k1, std::vector<std::string>& warn, std::mutex& mx)
{
    std::optional<HomoclinicRecord> prev;
    for (std::size_t k = k0; k < k1; ++k) {
        const double En = t.E[k];
        const PeriodicOrbitRecord rec = solve_periodic(En, m, ts.mel.manifold.flow);
        HomoclinicRecord h;
        if (prev) {
            try {
                h = continue_homoclinic(m, rec, *prev, ts.mel.manifold);
            } catch (const NumericalError& e) {
                std::lock_guard lk(mx);
                warn.push_back("re-anchored at E=" + std::to_string(En) + ": " + e.what());
                h = find_homoclinic(m, rec, Channel::Pri, ts.mel.manifold);
            }
        } else {
            h = find_homoclinic(m, rec, Channel::Pri, ts.mel.manifold);
        }
        max_eccentricity(m, rec, h, ts.mel.manifold);
        const MelnikovRecord r = compute_melnikov(m, rec, h, ts.mel);
        t.T0s[k] = rec.T0;
        t.zetas[k] = r.zeta;
        t.A1s[k] = r.A1p;
        t.B1_backs[k] = r.B1_back;
        t.B1_fwds[k] = r.B1_fwd;
        t.e_maxs[k] = h.e_max;
        t.i_secs[k] = rec.i_section * kDeg;
        t.hom_i_min[k] = h.i_min;
        t.hom_i_max[k] = h.i_max;
        prev = h;
    }
}

} // namespace

void DiffusionTables::finalize(double n, double alpha3, double delta_E)
{
    n_ = n;
    alpha3_ = alpha3;
    delta_E_ = delta_E;
    const std::size_t N = E.size();
    if (N < 4) throw ConfigError("diffusion tables need at least 4 grid points");
    const double h = (E.back() - E.front()) / double(N - 1);
    auto mk = [&](const std::vector<double>& v) { return Spline(v.data(), v.size(), E.front(), h); };
    auto re = [](const std::vector<cplx>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
        return r;
    };
    auto im = [](const std::vector<cplx>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].imag();
        return r;
    };
    T0_ = mk(T0s);
    zeta_ = mk(zetas);
    emax_ = mk(e_maxs);
    isec_ = mk(i_secs);
    A1r_ = mk(re(A1s));
    A1i_ = mk(im(A1s));
    bbr_ = mk(re(B1_backs));
    bbi_ = mk(im(B1_backs));
    bfr_ = mk(re(B1_fwds));
    bfi_ = mk(im(B1_fwds));
}

void DiffusionTables::check(double En) const
{
    if (E.empty()) throw DomainError("diffusion tables are empty");
    if (!(En >= E.front() && En <= E.back()))
        throw DomainError("energy " + std::to_string(En) + " outside the tabulated window");
}

double DiffusionTables::T0(double En) const { check(En); return T0_(En); }
double DiffusionTables::e_max(double En) const { check(En); return emax_(En); }
double DiffusionTables::i_section(double En) const { check(En); return isec_(En); }
cplx DiffusionTables::A1(double En) const { check(En); return {A1r_(En), A1i_(En)}; }

int DiffusionTables::sec_band(double En) const
{
    for (std::size_t k = 0; k < sec.size(); ++k)
        if (std::abs(En - sec[k].E) <= delta_E_) return int(k);
    return -1;
}

bool DiffusionTables::in_domain(double En, Channel ch) const
{
    if (!(En >= E.front() && En <= E.back())) return false;
    return ch == Channel::Sec ? sec_band(En) >= 0 : sec_band(En) < 0;
}

double DiffusionTables::zeta(double En, Channel ch) const
{
    check(En);
    if (ch == Channel::Sec) {
        const int b = sec_band(En);
        if (b < 0) throw DomainError("no sec data at this energy");
        return sec[std::size_t(b)].zeta;
    }
    return zeta_(En);
}

cplx DiffusionTables::B1(double En, Channel ch) const
{
    check(En);
    if (ch == Channel::Sec) {
        const int b = sec_band(En);
        if (b < 0) throw DomainError("no sec data at this energy");
        return sec[std::size_t(b)].B1p;
    }
    const cplx back{bbr_(En), bbi_(En)}, fwd{bfr_(En), bfi_(En)};
    return -kI * alpha3_ * (back + std::exp(kI * (n_ * zeta_(En))) * fwd);
}

DiffusionTables build_tables(const Model& m, const TableSettings& ts)
{
    if (ts.N < 4 || !(ts.E_hi > ts.E_lo)) throw ConfigError("invalid diffusion table grid");
    DiffusionTables t;
    const std::size_t N = std::size_t(ts.N);
    t.E.resize(N);
    for (std::size_t k = 0; k < N; ++k)
        t.E[k] = ts.E_lo + (ts.E_hi - ts.E_lo) * double(k) / double(N - 1);
    t.T0s.assign(N, 0.0);
    t.zetas = t.e_maxs = t.i_secs = t.hom_i_min = t.hom_i_max = t.T0s;
    t.A1s.assign(N, cplx{});
    t.B1_backs = t.B1_fwds = t.A1s;

    const std::size_t nt = std::size_t(std::clamp(ts.threads, 1, ts.N / 4));
    std::mutex mx;
    std::vector<std::string> warn;
    std::vector<std::exception_ptr> errs(nt);
    auto run = [&](std::size_t w) {
        try {
            fill_chunk(m, ts, t, N * w / nt, N * (w + 1) / nt, warn, mx);
        } catch (...) {
            errs[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < nt; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    // A sec band whose homoclinic point cannot be refined is left out; the
    // pri channel then covers that energy.
    for (double Et : ts.tangencies) {
        try {
            t.sec.push_back(compute_melnikov(m, Et, Channel::Sec, ts.mel));
        } catch (const NumericalError& e) {
            warn.push_back("sec band at E = " + std::to_string(Et) + " dropped: " + e.what());
        }
    }
    t.warnings = std::move(warn);
    t.finalize(m.n(), m.alpha3(), ts.delta_E);
    return t;
}

CylinderPoint inner_map(const CylinderPoint& p, double iM, const DiffusionTables& t,
                        bool phase_at_new_action)
{
    const double En = t.E_of(p.J);
    const cplx A = t.A1(En);
    const double J1 = p.J + 2.0 * iM * std::real(A * std::exp(kI * p.OmegaM));
    const double Ep = phase_at_new_action ? t.E_of(J1) : En;
    return {J1, wrap_angle(p.OmegaM + t.n() * t.T0(Ep))};
}

CylinderPoint outer_map(const CylinderPoint& p, Channel ch, double iM, const DiffusionTables& t,
                        bool phase_at_new_action)
{
    const double En = t.E_of(p.J);
    if (!t.in_domain(En, ch))
        throw DomainError("outer map: E = " + std::to_string(En) + " outside the "
                          + to_string(ch) + " domain");
    const cplx B = t.B1(En, ch);
    const double J1 = p.J + 2.0 * iM * std::real(B * std::exp(kI * p.OmegaM));
    // The sec data is constant across its band.
    const double Ep = phase_at_new_action && ch == Channel::Pri ? t.E_of(J1) : En;
    const double z = t.zeta(Ep, ch);
    return {J1, wrap_angle(p.OmegaM + t.n() * z)};
}

std::string to_string(Move mv)
{
    switch (mv) {
    case Move::Inner: return "inner";
    case Move::OuterPri: return "outer_pri";
    case Move::OuterSec: return "outer_sec";
    }
    return "?";
}

PseudoOrbit build_pseudo_orbit(double iM, double nu, double delta, const DiffusionTables& t,
                               std::uint64_t seed, const BuilderSettings& bs)
{
    PseudoOrbit po;
    po.iM = iM;
    po.nu = nu;
    po.delta = delta;
    po.J_min = t.J_of(bs.E_start);
    po.J_max = t.J_of(bs.E_end);
    if (!(po.J_min < po.J_max)) throw ConfigError("builder: J(E_start) must be below J(E_end)");
    if (std::abs(delta - t.delta_E()) > 1e-9 * std::abs(delta))
        throw ConfigError("builder: delta must equal the sec-band width of the tables");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    CylinderPoint z{po.J_min, phase(rng)};
    po.points.push_back(z);

    long waiting = 0;
    while (z.J < po.J_max - nu) {
        if (long(po.moves.size()) >= bs.max_moves) return po;
        const double En = t.E_of(z.J);
        const Channel ch = t.sec_band(En) >= 0 ? Channel::Sec : Channel::Pri;
        const double nT = t.n() * t.T0(En);
        const cplx A = t.A1(En), B = t.B1(En, ch);
        const cplx dT = std::exp(kI * nT) - 1.0;
        const cplx dZ = std::exp(kI * (t.n() * t.zeta(En, ch))) - 1.0;
        const bool gate = std::abs(nT - 2.0 * kTwoPi) < bs.resonance_gate;

        // Straightened action: the coordinate in which the non-targeted map
        // is a pure rotation to first order. Away from the resonance the outer
        // map is targeted; inside the gate the roles swap and the outer map
        // only repositions the phase.
        const cplx C = gate ? A - B * dT / dZ : B - A * dZ / dT;
        const cplx G = gate ? -B / dZ : -A / dT;
        auto straight = [&](const CylinderPoint& q) {
            return q.J + 2.0 * iM * std::real(G * std::exp(kI * q.OmegaM));
        };
        const CylinderPoint target = gate ? inner_map(z, iM, t, bs.inner_phase_at_new_action)
                                          : outer_map(z, ch, iM, t, false);
        // The gain is measured on the realized move; for small i_M it equals
        // the linear jump i_M (C e^{i Omega} + c.c.).
        const double gain = straight(target) - straight(z);
        const bool favourable = iM > 0.0 && gain > 0.0 && gain >= bs.window_fraction * 2.0 * iM * std::abs(C);
        const bool outer = gate ? !favourable : favourable;

        CylinderPoint nz;
        Move mv;
        if (outer) {
            nz = gate ? outer_map(z, ch, iM, t, false) : target;
            mv = ch == Channel::Sec ? Move::OuterSec : Move::OuterPri;
            ++po.n_outer;
        } else {
            nz = gate ? target : inner_map(z, iM, t, bs.inner_phase_at_new_action);
            mv = Move::Inner;
            ++po.n_inner;
        }
        const bool targeted = gate ? !outer : outer;
        waiting = targeted ? 0 : waiting + 1;
        if (waiting > bs.max_iter)
            throw NumericalError("builder stalled: no admissible phase within max_iter moves at E = "
                                 + std::to_string(En));
        po.moves.push_back(mv);
        po.jumps.push_back(nz.J - z.J);
        po.points.push_back(nz);
        z = nz;
    }
    po.reached = true;
    return po;
}

DriftSummary report_drift(const PseudoOrbit& po, const DiffusionTables& t)
{
    DriftSummary d;
    d.steps = long(po.moves.size());
    d.n_inner = po.n_inner;
    d.n_outer = po.n_outer;
    d.E_start = t.E_of(po.points.front().J);
    d.E_end = t.E_of(po.points.back().J);
    d.E_min = d.E_max = d.E_start;
    d.i_lo = 1e9;
    d.i_hi = -1e9;
    d.e_lo = 1e9;
    d.e_hi = -1e9;
    d.gain_bound_violation = -1e300;
    for (std::size_t k = 0; k < po.points.size(); ++k) {
        const double En = t.E_of(po.points[k].J);
        d.E_min = std::min(d.E_min, En);
        d.E_max = std::max(d.E_max, En);
        d.e_lo = std::min(d.e_lo, t.e_max(En));
        d.e_hi = std::max(d.e_hi, t.e_max(En));
        d.i_lo = std::min(d.i_lo, t.i_section(En));
        d.i_hi = std::max(d.i_hi, t.i_section(En));
        if (k < po.moves.size()) {
            const Channel ch = po.moves[k] == Move::OuterSec ? Channel::Sec : Channel::Pri;
            const double bound = po.iM * (2.0 * std::abs(t.B1(En, ch)) + 2.0 * std::abs(t.A1(En)));
            d.max_gain = std::max(d.max_gain, po.jumps[k]);
            d.gain_bound_violation = std::max(d.gain_bound_violation, po.jumps[k] - bound);
        }
    }
    d.e_start = t.e_max(d.E_start);
    d.e_end = t.e_max(d.E_end);
    return d;
}

ScalingStudy scaling_study(const std::vector<double>& iMs, double nu, double delta,
                           const DiffusionTables& t, std::uint64_t seed, const BuilderSettings& bs)
{
    ScalingStudy s;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (double iM : iMs) {
        const PseudoOrbit po = build_pseudo_orbit(iM, nu, delta, t, seed, bs);
        s.points.push_back({iM, long(po.moves.size()), po.reached});
        if (po.moves.empty()) continue;
        const double x = std::log(iM), y = std::log(double(po.moves.size()));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) s.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return s;
}

} // namespace secres
