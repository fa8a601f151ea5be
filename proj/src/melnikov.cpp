// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/melnikov.hpp"
#include "secres/errors.hpp"
#include "integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace secres {

using detail::StateN;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

// Integrates one h-block of length 2 pi starting at p (h = 0). Forward time
// runs towards h = -2 pi; dir = -1 integrates backwards in time to h = +2 pi.
// Returns the end state and accumulates t and int R1^+ e^{i n t} dt with t
// measured from p.
struct BlockRun {
    PoincareState end;
    double t = 0.0;
    cplx I{};
};

BlockRun run_block(const Model& m, const PoincareState& p, int dir, const MelnikovSettings& s)
{
    const double n = m.n();
    StateN<6> x{p.eta, p.Gam, p.xi, 0.0, 0.0, 0.0};
    auto rhs = [&](const StateN<6>& y, StateN<6>& dy, double h) {
        const PoincareState st{y[0], y[1], y[2], h};
        const ReparamField f = vf_reparam(st, m);
        const cplx R = s.unit_integrand ? cplx(1.0, 0.0) : eval_R1pm(st, m).first;
        const cplx w = R * std::exp(kI * (n * y[3])) * f.dt;
        dy = {f.deta, f.dGam, f.dxi, f.dt, w.real(), w.imag()};
    };
    detail::integrate<6>(rhs, x, 0.0, dir > 0 ? -kTwoPi : kTwoPi, s.quad);
    return {{x[0], x[1], x[2], 0.0}, x[3], {x[4], x[5]}};
}

} // namespace

Block periodic_block(const Model& m, const PeriodicOrbitRecord& rec, const MelnikovSettings& s)
{
    const BlockRun r = run_block(m, {0.0, rec.Gam0, 0.0, 0.0}, +1, s);
    return {r.t, r.I};
}

HomoclinicTails homoclinic_tails(const Model& m, const PeriodicOrbitRecord& rec,
                                 const HomoclinicRecord& h, const MelnikovSettings& s)
{
    if (h.section_h != 0.0)
        throw DomainError("homoclinic_tails: the axis point must lie on {h = 0}");
    const double n = m.n();
    const BranchParam bu(m, rec, Side::Unstable, h.sign, s.manifold);
    const PoincareState su = bu.seed(h.u);
    // Reversor image of the W^u seed lies on W^s.
    const PoincareState ss = h.channel == Channel::Pri ? phi_h(su) : phi_v(su);

    HomoclinicTails tails;
    // Backward tail: blocks run forward in time from the seed to the axis point.
    PoincareState p = su;
    std::vector<Block> bk;
    for (int k = 0; k < h.n; ++k) {
        const BlockRun r = run_block(m, p, +1, s);
        bk.push_back({r.t, r.I});
        p = r.end;
    }
    std::reverse(bk.begin(), bk.end());
    tails.backward = std::move(bk);

    // Forward tail: from the W^s seed backwards in time to the axis point.
    // run_block returns int_0^{-dt} R e^{i n tau} dtau from the later end; the
    // forward-time integral from the earlier end is -e^{i n dt} times that.
    p = ss;
    std::vector<Block> fw;
    for (int k = 0; k < h.n; ++k) {
        const BlockRun r = run_block(m, p, -1, s);
        const double dt = -r.t;
        fw.push_back({dt, -std::exp(kI * (n * dt)) * r.I});
        p = r.end;
    }
    std::reverse(fw.begin(), fw.end());
    tails.forward = std::move(fw);
    return tails;
}

double zeta_from_blocks(const std::vector<Block>& blocks, double T0)
{
    // Sum from the outermost block inwards (smallest terms first).
    double z = 0.0;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) z += it->dt - T0;
    return z;
}

cplx A1_from_block(const Model& m, const Block& gamma) { return -kI * m.alpha3() * gamma.I; }

cplx B1_from_tails(const Model& m, const HomoclinicTails& t, const Block& gamma, double zeta_plus,
                   double* last_block, double* max_ratio, std::vector<double>* term_mags,
                   cplx* back, cplx* fwd)
{
    const double n = m.n(), T0 = gamma.dt;
    const std::size_t N = std::min(t.backward.size(), t.forward.size());
    std::vector<cplx> terms(N, cplx{});
    std::vector<double> mag_b(N, 0.0), mag_f(N, 0.0);
    cplx Sb{}, Sf{};
    // Backward: homoclinic phase e^{i n (t + zeta_+)}, periodic phase e^{i n t}.
    double Tb = 0.0;
    for (std::size_t l = 0; l < t.backward.size(); ++l) {
        Tb -= t.backward[l].dt;
        const cplx d = std::exp(kI * (n * (Tb + zeta_plus))) * t.backward[l].I
                     - std::exp(kI * (-n * double(l + 1) * T0)) * gamma.I;
        if (l < N) {
            terms[l] += d;
            mag_b[l] = std::abs(d);
            Sb += d;
        }
    }
    // Forward: homoclinic e^{i n (t + zeta_+)}, periodic e^{i n (t + 2 zeta_+)}.
    double Tf = 0.0;
    for (std::size_t l = 0; l < t.forward.size(); ++l) {
        const cplx d = std::exp(kI * (n * (Tf + zeta_plus))) * t.forward[l].I
                     - std::exp(kI * (n * (double(l) * T0 + 2.0 * zeta_plus))) * gamma.I;
        if (l < N) {
            terms[l] += d;
            mag_f[l] = std::abs(d);
            Sf += std::exp(kI * (n * (Tf - zeta_plus))) * t.forward[l].I
                - std::exp(kI * (n * double(l) * T0)) * gamma.I;
        }
        Tf += t.forward[l].dt;
    }
    cplx S{};
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) S += *it;
    if (back) *back = Sb;
    if (fwd) *fwd = Sf;
    if (term_mags) {
        term_mags->clear();
        for (const auto& d : terms) term_mags->push_back(std::abs(d));
    }
    if (last_block) *last_block = N ? std::abs(terms.back()) : 0.0;
    if (max_ratio) {
        // Each tail is measured on its own (their sum interferes), on blocks
        // that already shadow the periodic orbit (|dt - T0| < 1e-2 T0) and
        // stay well above the quadrature noise floor of the last blocks.
        auto decay = [N, T0](const std::vector<double>& v, const std::vector<Block>& blocks) {
            double floor = 0.0;
            for (std::size_t l = N > 3 ? N - 3 : 0; l < N; ++l) floor = std::max(floor, v[l]);
            double r = 0.0;
            for (std::size_t l = 0; l + 1 < N; ++l) {
                if (std::abs(blocks[l].dt - T0) >= 1e-2 * T0) continue;
                if (v[l + 1] < 1e3 * floor) break;
                r = std::max(r, v[l + 1] / v[l]);
            }
            return r;
        };
        *max_ratio = std::max(decay(mag_b, t.backward), decay(mag_f, t.forward));
    }
    return -kI * m.alpha3() * S;
}

cplx f_ansatz(double n, double T0, double zeta, cplx A1p, cplx B1p)
{
    return (std::exp(kI * (n * T0)) - 1.0) * B1p - (std::exp(kI * (n * zeta)) - 1.0) * A1p;
}

Straightened straightened_coeffs(double n, double T0, double zeta, cplx A1p, cplx B1p)
{
    const cplx dT = std::exp(kI * (n * T0)) - 1.0;
    const cplx dZ = std::exp(kI * (n * zeta)) - 1.0;
    Straightened r;
    if (std::abs(dT) >= 1e-6) {
        r.B1_tilde = B1p - A1p * dZ / dT;
        r.B1_tilde_valid = true;
    }
    if (std::abs(dZ) >= 1e-6) {
        r.A1_hat = A1p - B1p * dT / dZ;
        r.A1_hat_valid = true;
    }
    return r;
}

MelnikovRecord compute_melnikov(const Model& m, const PeriodicOrbitRecord& rec, Channel ch,
                                const MelnikovSettings& s)
{
    return compute_melnikov(m, rec, find_homoclinic(m, rec, ch, s.manifold), s);
}

MelnikovRecord compute_melnikov(const Model& m, const PeriodicOrbitRecord& rec,
                                const HomoclinicRecord& hom, const MelnikovSettings& s)
{
    MelnikovRecord r;
    r.E = rec.E;
    r.J = rec.J(m.n());
    r.channel = hom.channel;
    r.homoclinic = hom;
    const Block g = periodic_block(m, rec, s);
    r.T0 = g.dt;
    const HomoclinicTails t = homoclinic_tails(m, rec, r.homoclinic, s);
    r.zeta_plus = zeta_from_blocks(t.forward, r.T0);
    r.zeta_minus = -zeta_from_blocks(t.backward, r.T0);
    r.zeta = 2.0 * r.zeta_plus;
    r.A1p = A1_from_block(m, g);
    r.A1m = std::conj(r.A1p);
    r.B1p = B1_from_tails(m, t, g, r.zeta_plus, &r.last_block, &r.max_decay_ratio, nullptr,
                          &r.B1_back, &r.B1_fwd);
    r.B1m = std::conj(r.B1p);
    r.n_blocks = int(t.backward.size());
    r.f_plus = f_ansatz(m.n(), r.T0, r.zeta, r.A1p, r.B1p);
    r.f_minus = std::conj(r.f_plus);
    return r;
}

MelnikovRecord compute_melnikov(const Model& m, double E, Channel ch, const MelnikovSettings& s)
{
    return compute_melnikov(m, solve_periodic(E, m, s.manifold.flow), ch, s);
}

std::vector<MelnikovRecord> scan_melnikov(const Model& m, const std::vector<double>& E_grid,
                                          Channel ch, const MelnikovSettings& s, int threads,
                                          std::vector<std::string>* errors)
{
    std::vector<std::optional<MelnikovRecord>> rows(E_grid.size());
    std::vector<std::string> errs(E_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < E_grid.size();) {
            try {
                rows[k] = compute_melnikov(m, E_grid[k], ch, s);
            } catch (const std::exception& e) {
                errs[k] = e.what();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, int(E_grid.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    std::vector<MelnikovRecord> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k]) out.push_back(*rows[k]);
        else if (errors) errors->push_back("E=" + std::to_string(E_grid[k]) + ": " + errs[k]);
    }
    return out;
}

} // namespace secres
