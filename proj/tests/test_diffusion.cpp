// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/diffusion.hpp"
#include "secres/errors.hpp"

#include <cmath>

using namespace secres;

namespace {

// Tables with constant coefficients: n T0 = 4.1 pi, n zeta = 1, A1 = a, B1 = b.
DiffusionTables synthetic_tables(cplx a, cplx b, double delta_E = 1e-9)
{
    const Model& m = test::default_model();
    DiffusionTables t;
    const int N = 9;
    for (int k = 0; k < N; ++k) {
        t.E.push_back(-2.12e-7 + (1.36e-6 + 2.12e-7) * k / (N - 1));
        t.T0s.push_back(4.1 * M_PI / m.n());
        t.zetas.push_back(1.0 / m.n());
        t.e_maxs.push_back(0.5);
        t.i_secs.push_back(57.0);
        t.A1s.push_back(a);
        t.B1_backs.push_back(cplx(0, 1) * b / m.alpha3());
        t.B1_fwds.push_back(0.0);
    }
    t.finalize(m.n(), m.alpha3(), delta_E);
    return t;
}

} // namespace

TEST_SUITE("diffusion")
{
    TEST_CASE("table interpolants reproduce constant samples")
    {
        const DiffusionTables t = synthetic_tables({0.2, 0.1}, {0.5, -0.3});
        CHECK(t.n() * t.T0(3e-7) == doctest::Approx(4.1 * M_PI));
        CHECK(std::abs(t.B1(3e-7) - cplx(0.5, -0.3)) < 1e-12);
        CHECK(std::abs(t.A1(1e-6) - cplx(0.2, 0.1)) < 1e-12);
        CHECK(t.in_domain(3e-7, Channel::Pri));
        CHECK_FALSE(t.in_domain(3e-7, Channel::Sec));
        CHECK_THROWS_AS(t.T0(2e-6), DomainError);
        CHECK(t.J_of(t.E_of(0.01)) == doctest::Approx(0.01));
    }

    TEST_CASE("inner and outer maps")
    {
        const DiffusionTables t = synthetic_tables({0.2, 0.1}, {0.5, -0.3});
        const CylinderPoint p{t.J_of(5e-7), 0.7};
        const double iM = 1e-4;
        const CylinderPoint q = inner_map(p, iM, t);
        CHECK(q.J == doctest::Approx(p.J + 2 * iM * std::real(cplx(0.2, 0.1) * std::exp(cplx(0, 0.7)))));
        CHECK(q.OmegaM == doctest::Approx(wrap_angle(0.7 + 4.1 * M_PI)));
        const CylinderPoint r = outer_map(p, Channel::Pri, iM, t);
        CHECK(r.J == doctest::Approx(p.J + 2 * iM * std::real(cplx(0.5, -0.3) * std::exp(cplx(0, 0.7)))));
        CHECK(r.OmegaM == doctest::Approx(wrap_angle(1.7)));
        CHECK_THROWS_AS(outer_map(p, Channel::Sec, iM, t), DomainError);

        const CylinderPoint z = inner_map(p, 0.0, t);
        CHECK(z.J == p.J);
    }

    TEST_CASE("builder reaches the top of the window and is deterministic")
    {
        const DiffusionTables t = synthetic_tables({0.0, 0.0}, {0.5, 0.0});
        const PseudoOrbit a = build_pseudo_orbit(1e-3, 1e-4, 1e-9, t, 7);
        const PseudoOrbit b = build_pseudo_orbit(1e-3, 1e-4, 1e-9, t, 7);
        REQUIRE(a.reached);
        CHECK(a.points.back().J >= a.J_max - 1e-4);
        CHECK(a.points.front().J == a.J_min);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            CHECK(a.points[k].J == b.points[k].J);
            CHECK(a.points[k].OmegaM == b.points[k].OmegaM);
        }
        CHECK(a.moves.size() + 1 == a.points.size());
        const DriftSummary d = report_drift(a, t);
        CHECK(d.gain_bound_violation <= 1e-15);
        CHECK(d.E_end <= 1.7e-8 + 1e-4 * t.n());
        CHECK(d.n_outer > 0);
    }

    TEST_CASE("step count scales like one over i_M")
    {
        const DiffusionTables t = synthetic_tables({0.0, 0.0}, {0.5, 0.0});
        const ScalingStudy s = scaling_study({1e-4, 1e-3}, 1e-5, 1e-9, t, 3);
        REQUIRE(s.points.size() == 2);
        CHECK(s.points[0].reached);
        CHECK(s.points[1].reached);
        CHECK(std::abs(s.slope + 1.0) < 0.15);
    }

    TEST_CASE("argument validation")
    {
        const DiffusionTables t = synthetic_tables({0.0, 0.0}, {0.5, 0.0});
        CHECK_THROWS_AS(build_pseudo_orbit(1e-3, 1e-4, 2e-9, t, 1), ConfigError);
        BuilderSettings bs;
        bs.E_start = 1.7e-8;
        bs.E_end = 1.3e-6;
        CHECK_THROWS_AS(build_pseudo_orbit(1e-3, 1e-4, 1e-9, t, 1, bs), ConfigError);
        TableSettings ts;
        ts.N = 3;
        CHECK_THROWS_AS(build_tables(test::default_model(), ts), ConfigError);
    }
}
