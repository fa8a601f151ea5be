// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "secres/manifolds.hpp"
#include "secres/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

namespace secres {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDeg = 180.0 / kPi;

std::string fmt_e(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double dist2d(const PoincareState& a, const PoincareState& b)
{
    return std::hypot(a.xi - b.xi, a.eta - b.eta);
}

// Signed distance to the channel axis and the coordinate that must be positive.
double axis_value(const PoincareState& s, Channel ch) { return ch == Channel::Pri ? s.eta : s.xi; }
double along_value(const PoincareState& s, Channel ch) { return ch == Channel::Pri ? s.xi : s.eta; }

// One level of a branch polyline: parameters, h = 0 states, section states.
struct Level {
    int n = 0;
    std::vector<double> u;
    std::vector<PoincareState> base;
    std::vector<PoincareState> disp;
};

class LevelBuilder {
public:
    LevelBuilder(const BranchParam& bp, double delta, double min_du, std::size_t max_points)
        : bp_(bp), delta_(delta), min_du_(min_du), max_points_(max_points) {}

    Level first(int samples) const
    {
        Level L;
        L.n = 0;
        for (int j = 0; j <= samples; ++j) {
            const double u = double(j) / samples;
            L.u.push_back(u);
            L.base.push_back(bp_.seed(u));
            L.disp.push_back(bp_.on_section(L.base.back()));
        }
        return refine(L);
    }

    Level next(const Level& prev) const
    {
        Level L;
        L.n = prev.n + 1;
        L.u = prev.u;
        L.base.reserve(prev.base.size());
        for (const auto& p : prev.base) L.base.push_back(bp_.step(p));
        for (const auto& p : L.base) L.disp.push_back(bp_.on_section(p));
        return refine(L);
    }

private:
    Level refine(const Level& in) const
    {
        Level out;
        out.n = in.n;
        for (std::size_t i = 0; i + 1 < in.u.size(); ++i) {
            push(out, in.u[i], in.base[i], in.disp[i]);
            fill(out, in.u[i], in.disp[i], in.u[i + 1], in.disp[i + 1], 0);
        }
        push(out, in.u.back(), in.base.back(), in.disp.back());
        return out;
    }

    static void push(Level& L, double u, const PoincareState& b, const PoincareState& d)
    {
        L.u.push_back(u);
        L.base.push_back(b);
        L.disp.push_back(d);
    }

    void fill(Level& L, double ua, const PoincareState& da, double ub, const PoincareState& db,
              int depth) const
    {
        if (dist2d(da, db) <= delta_ || ub - ua <= min_du_ || depth > 60) return;
        if (L.u.size() > max_points_)
            throw NumericalError("manifold polyline exceeded max_points");
        const double um = 0.5 * (ua + ub);
        const PoincareState bm = bp_.base_point(L.n, um);
        const PoincareState dm = bp_.on_section(bm);
        fill(L, ua, da, um, dm, depth + 1);
        push(L, um, bm, dm);
        fill(L, um, dm, ub, db, depth + 1);
    }

    const BranchParam& bp_;
    double delta_, min_du_;
    std::size_t max_points_;
};

} // namespace

std::string to_string(Channel c) { return c == Channel::Pri ? "pri" : "sec"; }

Channel channel_from_string(const std::string& s)
{
    if (s == "pri") return Channel::Pri;
    if (s == "sec") return Channel::Sec;
    throw ConfigError("unknown channel '" + s + "' (expected pri or sec)");
}

BranchParam::BranchParam(const Model& m, const PeriodicOrbitRecord& rec, Side side, int sign,
                         const ManifoldSettings& ms)
    : m_(m), rec_(rec), side_(side), sign_(sign >= 0 ? 1 : -1), ms_(ms)
{
    if (rec.kind != OrbitKind::Hyperbolic)
        throw DomainError("manifolds: periodic orbit is not hyperbolic");
    dir_ = double(sign_) * (side == Side::Unstable ? rec.evec_u : rec.evec_s);
}

PoincareState BranchParam::seed(double u) const
{
    const double d = ms_.seed_dist * std::pow(rec_.lambda_mult, u);
    const double xi = d * dir_(0), eta = d * dir_(1);
    const double G = recover_gamma(eta, xi, 0.0, rec_.E, m_, rec_.Gam0);
    return {eta, G, xi, 0.0};
}

PoincareState BranchParam::step(const PoincareState& p) const
{
    return poincare_map(p, m_, ms_.flow, side_ == Side::Unstable ? +1 : -1).s;
}

PoincareState BranchParam::on_section(const PoincareState& base) const
{
    if (ms_.section_h == 0.0) return base;
    // Forward (unstable) or backward (stable) flow from h = 0 to the section.
    const double target = side_ == Side::Unstable ? -ms_.section_h : ms_.section_h;
    PoincareState s = flow_to_h(base, target, m_, ms_.flow).s;
    s.h = ms_.section_h;
    return s;
}

PoincareState BranchParam::base_point(int n, double u) const
{
    PoincareState p = seed(u);
    for (int k = 0; k < n; ++k) p = step(p);
    return p;
}

BranchParam::Tangent BranchParam::point_tangent(int n, double u) const
{
    PoincareState p = seed(u);
    const double d = ms_.seed_dist * std::pow(rec_.lambda_mult, u);
    const double dd = std::log(rec_.lambda_mult) * d;
    Eigen::Vector3d t;
    t(0) = dd * dir_(1);
    t(2) = dd * dir_(0);
    const auto g = grad_Hcp(p, m_);
    t(1) = -(g[kEta] * t(0) + g[kXi] * t(2)) / g[kGam];
    const double dh = side_ == Side::Unstable ? -kTwoPi : kTwoPi;
    for (int k = 0; k < n; ++k) {
        const SectionTangent st = variational_section(p, dh, m_, ms_.flow);
        t = st.D.topRows<3>() * t;
        p = st.end.s;
        p.h = 0.0;
    }
    if (ms_.section_h != 0.0) {
        const double target = side_ == Side::Unstable ? -ms_.section_h : ms_.section_h;
        const SectionTangent st = variational_section(p, target, m_, ms_.flow);
        t = st.D.topRows<3>() * t;
        p = st.end.s;
        p.h = ms_.section_h;
    }
    return {p, t};
}

ManifoldBranch globalize(const Model& m, const PeriodicOrbitRecord& rec, Side side, int sign,
                         const ManifoldSettings& ms, int iter_depth)
{
    const BranchParam bp(m, rec, side, sign, ms);
    const LevelBuilder lb(bp, ms.delta_max, ms.min_du, ms.max_points);
    ManifoldBranch br;
    br.E = rec.E;
    br.side = side;
    br.sign = bp.sign();
    br.iter_depth = iter_depth;
    if (iter_depth <= 0) {
        br.points.push_back({0, 0.0, {0.0, rec.Gam0, 0.0, ms.section_h}});
        return br;
    }
    Level L = lb.first(ms.samples);
    for (int n = 0; n < iter_depth; ++n) {
        if (n > 0) L = lb.next(L);
        // Level n and n+1 overlap at u = 1 / u = 0; keep u in [0, 1).
        for (std::size_t i = 0; i + 1 < L.u.size(); ++i) br.points.push_back({n, L.u[i], L.disp[i]});
        if (br.points.size() > ms.max_points)
            throw NumericalError("globalize: polyline exceeded max_points");
    }
    return br;
}

std::pair<double, double> splitting_angle(const Eigen::Vector2d& t, Channel ch)
{
    // t = (t_xi, t_eta). At a pri point the W^s tangent is the Phi^h image of t
    // taken along the flow, -(t_xi, -t_eta); at a sec point it is the Phi^v
    // image (-t_xi, t_eta). Both reduce to the same vector.
    (void)ch;
    const Eigen::Vector2d r(-t(0), t(1));
    const double cross = t(0) * r(1) - t(1) * r(0);
    const double oriented = std::atan2(cross, t.dot(r));
    return {std::abs(oriented), oriented};
}

namespace {

HomoclinicRecord make_record(const BranchParam& bp, const PeriodicOrbitRecord& rec, Channel ch,
                             const ManifoldSettings& ms, int n, double u,
                             const BranchParam::Tangent& pt)
{
    // The target is 1e-12; after a saddle passage (sec) the attainable
    // floor is set by integration noise amplified along the branch.
    const double resid = std::abs(axis_value(pt.s, ch));
    const double bound = std::max(ms.axis_tol_hard, ms.axis_tol_rel * std::abs(along_value(pt.s, ch)));
    if (resid > bound)
        throw NumericalError("find_homoclinic: axis residual " + fmt_e(resid) + " at n="
                             + std::to_string(n));
    HomoclinicRecord h;
    h.E = rec.E;
    h.channel = ch;
    h.coord = along_value(pt.s, ch);
    h.n = n;
    h.u = u;
    h.side = bp.side();
    h.sign = bp.sign();
    h.section_h = ms.section_h;
    h.point = pt.s;
    h.axis_residual = resid;
    h.tangent = pt.t;
    const auto [phi, phio] = splitting_angle({pt.t(2), pt.t(0)}, ch);
    h.phi = phi;
    h.phi_oriented = phio;
    return h;
}

} // namespace

HomoclinicRecord find_homoclinic(const Model& m, const PeriodicOrbitRecord& rec, Channel ch,
                                 const ManifoldSettings& ms, Side side)
{
    int sign = ms.branch_sign;
    if (side == Side::Stable) {
        // The stable branch paired with the unstable one by the channel's reversor.
        const Eigen::Vector2d du = double(ms.branch_sign) * rec.evec_u;
        const Eigen::Vector2d img = ch == Channel::Pri ? Eigen::Vector2d(du(0), -du(1))
                                                       : Eigen::Vector2d(-du(0), du(1));
        sign = img.dot(rec.evec_s) >= 0.0 ? 1 : -1;
    }
    const BranchParam bp(m, rec, side, sign, ms);
    const LevelBuilder lb(bp, ms.search_delta, ms.min_du, ms.max_points);

    Level L = lb.first(ms.samples);
    for (int n = 0; n <= ms.max_iter; ++n) {
        if (n > 0) L = lb.next(L);
        for (std::size_t i = 0; i + 1 < L.u.size(); ++i) {
            const PoincareState& a = L.disp[i];
            const PoincareState& b = L.disp[i + 1];
            const double fa = axis_value(a, ch), fb = axis_value(b, ch);
            if (fa * fb > 0.0 || (fa == 0.0 && fb == 0.0)) continue;
            if (!(along_value(a, ch) > 0.0 && along_value(b, ch) > 0.0)) continue;
            auto f = [&](double u) { return axis_value(bp.point(n, u), ch); };
            boost::uintmax_t iters = 200;
            const auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-16; };
            double u;
            if (fa == 0.0) u = L.u[i];
            else if (fb == 0.0) u = L.u[i + 1];
            else {
                const auto br = boost::math::tools::toms748_solve(f, L.u[i], L.u[i + 1], fa, fb,
                                                                  tol, iters);
                u = 0.5 * (br.first + br.second);
            }
            const auto pt = bp.point_tangent(n, u);
            if (!(along_value(pt.s, ch) > 0.0)) continue;
            return make_record(bp, rec, ch, ms, n, u, pt);
        }
    }
    throw NumericalError("find_homoclinic: no " + to_string(ch) + " crossing within max_iter");
}

HomoclinicRecord continue_homoclinic(const Model& m, const PeriodicOrbitRecord& rec,
                                     const HomoclinicRecord& prev, const ManifoldSettings& ms,
                                     double du)
{
    const Channel ch = prev.channel;
    const BranchParam bp(m, rec, prev.side, prev.sign, ms);
    // Keep the parameter near the fundamental domain; q(n, u + 1) and
    // q(n + 1, u) agree to the order of the linearization.
    int n = prev.n;
    double u0 = prev.u;
    if (u0 > 1.5) { u0 -= 1.0; ++n; }
    if (u0 < -0.5) { u0 += 1.0; --n; }
    auto f = [&](double u) { return axis_value(bp.point(n, u), ch); };
    // Walk outwards on both sides until a neighbouring pair changes sign.
    const double f0 = f(u0);
    double a = u0, b = u0, fa = f0, fb = f0;
    double lo = u0, flo = f0, hi = u0, fhi = f0;
    bool found = f0 == 0.0;
    for (int k = 1; !found; ++k) {
        if (k * du > 0.75)
            throw NumericalError("continue_homoclinic: no crossing near u = " + fmt_e(prev.u));
        const double nhi = u0 + k * du, fnhi = f(nhi);
        if (fnhi * fhi <= 0.0) { a = hi; fa = fhi; b = nhi; fb = fnhi; found = true; break; }
        hi = nhi; fhi = fnhi;
        const double nlo = u0 - k * du, fnlo = f(nlo);
        if (fnlo * flo <= 0.0) { a = nlo; fa = fnlo; b = lo; fb = flo; found = true; break; }
        lo = nlo; flo = fnlo;
    }
    double u;
    if (fa == 0.0) u = a;
    else if (fb == 0.0) u = b;
    else {
        boost::uintmax_t iters = 200;
        const auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-16; };
        const auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
        u = 0.5 * (br.first + br.second);
    }
    const auto pt = bp.point_tangent(n, u);
    if (!(along_value(pt.s, ch) > 0.0))
        throw NumericalError("continue_homoclinic: crossing left the channel half-axis");
    return make_record(bp, rec, ch, ms, n, u, pt);
}

void max_eccentricity(const Model& m, const PeriodicOrbitRecord& rec, HomoclinicRecord& h,
                      const ManifoldSettings& ms)
{
    // The excursion from the seed to the axis point; the other half is its
    // reversor image and carries the same (M, Gamma) values.
    const BranchParam bp(m, rec, h.side, h.sign, ms);
    const PoincareState s0 = bp.seed(h.u);
    const double hend = (h.side == Side::Unstable ? -1.0 : 1.0) * (kTwoPi * h.n + h.section_h);
    double emax = 0.0, imin = 1e9, imax = -1e9;
    flow_to_h(s0, hend, m, ms.flow, [&](const PoincareState& s, double) {
        const OsculatingElements oe = osculating_elements(s, m.L());
        emax = std::max(emax, oe.e);
        imin = std::min(imin, oe.i);
        imax = std::max(imax, oe.i);
    });
    h.e_max_flow = emax;
    h.i_min_flow = std::min(imin, rec.i_min) * kDeg;
    h.i_max_flow = std::max(imax, rec.i_max) * kDeg;

    // Section values: the iterates of the seed and the axis point itself.
    const OsculatingElements oe_fix =
        osculating_elements(PoincareState{0.0, rec.Gam0, 0.0, 0.0}, m.L());
    double se = 0.0, si_lo = oe_fix.i, si_hi = oe_fix.i;
    auto take = [&](const PoincareState& s) {
        const OsculatingElements oe = osculating_elements(s, m.L());
        se = std::max(se, oe.e);
        si_lo = std::min(si_lo, oe.i);
        si_hi = std::max(si_hi, oe.i);
    };
    PoincareState q = s0;
    take(q);
    for (int k = 0; k < h.n; ++k) {
        q = bp.step(q);
        take(q);
    }
    if (h.section_h == 0.0) take(h.point);
    h.e_max = se;
    h.i_min = si_lo * kDeg;
    h.i_max = si_hi * kDeg;
}

std::vector<TangencyScanRow> scan_first_crossings(const Model& m, const std::vector<double>& E_grid,
                                                  Channel ch, const ManifoldSettings& ms,
                                                  int threads)
{
    std::vector<TangencyScanRow> rows(E_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < E_grid.size();) {
            rows[k].E = E_grid[k];
            try {
                const PeriodicOrbitRecord rec = solve_periodic(E_grid[k], m, ms.flow);
                rows[k].h = find_homoclinic(m, rec, ch, ms);
            } catch (const std::exception& e) {
                rows[k].error = e.what();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, int(E_grid.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::vector<Tangency> scan_tangencies(const Model& m, const std::vector<double>& E_grid, Channel ch,
                                      const ManifoldSettings& ms, int threads, double E_tol)
{
    const auto rows = scan_first_crossings(m, E_grid, ch, ms, threads);
    std::vector<Tangency> out;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        if (!rows[k].h || !rows[k + 1].h) continue;
        const double fa = rows[k].h->phi_oriented, fb = rows[k + 1].h->phi_oriented;
        if (fa * fb > 0.0) continue;
        const HomoclinicRecord anchor = *rows[k].h;
        auto phio = [&](double E) {
            const PeriodicOrbitRecord rec = solve_periodic(E, m, ms.flow);
            try {
                return continue_homoclinic(m, rec, anchor, ms).phi_oriented;
            } catch (const NumericalError&) {
                return find_homoclinic(m, rec, ch, ms).phi_oriented;
            }
        };
        Tangency t;
        boost::uintmax_t iters = 60;
        const auto br = boost::math::tools::toms748_solve(
            phio, rows[k].E, rows[k + 1].E, fa, fb,
            [E_tol](double a, double b) { return std::abs(b - a) < E_tol; }, iters);
        t.E_lo = br.first;
        t.E_hi = br.second;
        t.E = 0.5 * (br.first + br.second);
        t.phi_near = std::max(std::abs(fa), std::abs(fb));
        out.push_back(t);
    }
    return out;
}

} // namespace secres
