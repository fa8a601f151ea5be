// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/coords.hpp"
#include "secres/errors.hpp"

#include <cmath>

using namespace secres;

namespace {
constexpr double kDeg = 180.0 / M_PI;
}

TEST_SUITE("coords")
{
    TEST_CASE("resonance inclinations")
    {
        CHECK(std::abs(resonance_inclination_prograde() * kDeg - 56.06) < 0.01);
        CHECK(std::abs(resonance_inclination_retrograde() * kDeg - 110.99) < 0.01);
        CHECK(resonance_slope() == doctest::Approx((-4.0 + std::sqrt(21.0)) / 5.0).epsilon(1e-15));
    }

    TEST_CASE("Delaunay to Poincare and back")
    {
        DelaunayState d;
        d.G = 0.8;
        d.H = 0.35;
        d.g = 1.1;
        d.h = 2.3;
        const SlowFastState sf = delaunay_to_slowfast(d);
        CHECK(sf.y == doctest::Approx(0.4));
        const PoincareState p = slowfast_to_poincare(sf, 1.0);
        const SlowFastState back = poincare_to_slowfast(p, 1.0);
        CHECK(back.y == doctest::Approx(sf.y).epsilon(1e-14));
        CHECK(back.Gam == doctest::Approx(sf.Gam).epsilon(1e-14));
        CHECK(wrap_angle(back.x - sf.x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        const DelaunayState dd = slowfast_to_delaunay(back, 1.0);
        CHECK(dd.G == doctest::Approx(d.G).epsilon(1e-14));
        CHECK(dd.H == doctest::Approx(d.H).epsilon(1e-14));
        CHECK(dd.g == doctest::Approx(d.g).epsilon(1e-12));
    }

    TEST_CASE("osculating elements")
    {
        const OsculatingElements circ = osculating_elements({0, 0.1, 0, 0}, 1.0);
        CHECK(circ.e == 0.0);
        // G = L on the circular point, cos i = (Gamma + 1/2) / 1.
        CHECK(std::cos(circ.i) == doctest::Approx(0.6).epsilon(1e-14));
        const OsculatingElements ecc = osculating_elements({0.3, 0.1, 0.4, 0}, 1.0);
        const double G = (2.0 - 0.25) / 2.0;
        CHECK(ecc.e == doctest::Approx(std::sqrt(1 - G * G)).epsilon(1e-14));
        CHECK_THROWS_AS(osculating_elements({1.0, 0.0, 1.0, 0.0}, 1.0), DomainError);
    }

    TEST_CASE("circular point has undefined angle")
    {
        const SlowFastState s = poincare_to_slowfast({0, 0.1, 0, 0.5}, 1.0);
        CHECK(s.x_undefined);
        CHECK(s.y == doctest::Approx(0.5));
    }

    TEST_CASE("wrap_angle range")
    {
        for (double a : {-7.0, -M_PI, 0.0, 2 * M_PI, 13.0}) {
            const double w = wrap_angle(a);
            CHECK(w >= 0.0);
            CHECK(w < 2 * M_PI);
            CHECK(std::remainder(w - a, 2 * M_PI) == doctest::Approx(0.0).scale(1.0));
        }
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("coords.symplectic");
        test::require_check_passes("coords.circular");
        test::require_check_passes("coords.resonance");
    }
}
