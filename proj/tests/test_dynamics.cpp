// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/dynamics.hpp"
#include "secres/errors.hpp"

#include <cmath>

using namespace secres;

namespace {
const PoincareState kStart{0.02, 0.05, 0.01, 0.0};
}

TEST_SUITE("dynamics")
{
    TEST_CASE("return map decreases h by one turn")
    {
        const Model& m = test::default_model();
        const TimedState r = poincare_map(kStart, m);
        CHECK(std::remainder(r.s.h - kStart.h, 2 * M_PI) == doctest::Approx(0.0).scale(1.0));
        CHECK(r.t > 0.0);
        const TimedState back = poincare_map(r.s, m, {}, -1);
        CHECK(back.s.eta == doctest::Approx(kStart.eta).epsilon(1e-9));
        CHECK(back.s.xi == doctest::Approx(kStart.xi).epsilon(1e-9));
        CHECK(back.s.Gam == doctest::Approx(kStart.Gam).epsilon(1e-11));
    }

    TEST_CASE("h-parametrized and time-parametrized returns agree")
    {
        const Model& m = test::default_model();
        const TimedState a = poincare_map(kStart, m);
        const TimedState b = poincare_map_physical(kStart, m);
        CHECK(b.s.eta == doctest::Approx(a.s.eta).epsilon(1e-8));
        CHECK(b.s.xi == doctest::Approx(a.s.xi).epsilon(1e-8));
        CHECK(b.t == doctest::Approx(a.t).epsilon(1e-10));
    }

    TEST_CASE("energy is conserved over ten returns")
    {
        const Model& m = test::default_model();
        const double E0 = eval_Hcp(kStart, m);
        PoincareState s = kStart;
        for (int k = 0; k < 10; ++k) s = poincare_map(s, m).s;
        CHECK(std::abs(eval_Hcp(s, m) - E0) < 1e-13);
    }

    TEST_CASE("reversing involution conjugates forward and backward flow")
    {
        const Model& m = test::default_model();
        const double T = 5e4;
        const PoincareState fwd = flow_time(kStart, T, m).s;
        const PoincareState img = flow_time(phi_h(fwd), T, m).s;
        const PoincareState want = phi_h(kStart);
        CHECK(std::abs(img.eta - want.eta) < 1e-10);
        CHECK(std::abs(img.xi - want.xi) < 1e-10);
        CHECK(std::abs(img.Gam - want.Gam) < 1e-10);
    }

    TEST_CASE("variational flow matches differenced flow")
    {
        const Model& m = test::default_model();
        const double T = 2e4;
        const TangentState ts = variational_flow(kStart, Eigen::Matrix4d::Identity(), T, m);
        const double d = 1e-7;
        PoincareState a = kStart, b = kStart;
        a.xi += d;
        b.xi -= d;
        const PoincareState fa = flow_time(a, T, m).s, fb = flow_time(b, T, m).s;
        CHECK((fa.eta - fb.eta) / (2 * d) == doctest::Approx(ts.M(kEta, kXi)).epsilon(1e-5));
        CHECK((fa.xi - fb.xi) / (2 * d) == doctest::Approx(ts.M(kXi, kXi)).epsilon(1e-5));
    }

    TEST_CASE("recover_gamma solves the energy equation")
    {
        const Model& m = test::default_model();
        const double E = eval_Hcp(kStart, m);
        const double G = recover_gamma(kStart.eta, kStart.xi, kStart.h, E, m, 0.03);
        CHECK(G == doctest::Approx(kStart.Gam).epsilon(1e-12));
        CHECK_THROWS_AS(recover_gamma(0.0, 0.0, 0.0, 1.0, m, 0.1), NumericalError);
    }

    TEST_CASE("extended flow with zero inclination keeps J")
    {
        const Model& m = test::default_model();
        ExtendedState x;
        x.Gam = 0.05;
        x.J = 0.01;
        x.OmegaM = 1.0;
        const ExtendedState y = flow_extended_to_h(x, 0.0, -2 * M_PI, m);
        CHECK(y.J == 0.01);
        CHECK(y.h == doctest::Approx(-2 * M_PI));
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("dynamics.energy");
        test::require_check_passes("dynamics.step_halving");
        test::require_check_passes("dynamics.reversibility");
    }
}
