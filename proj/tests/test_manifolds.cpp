// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/errors.hpp"
#include "secres/manifolds.hpp"

#include <cmath>

using namespace secres;

TEST_SUITE("manifolds")
{
    TEST_CASE("channel names")
    {
        CHECK(channel_from_string("pri") == Channel::Pri);
        CHECK(channel_from_string(to_string(Channel::Sec)) == Channel::Sec);
        CHECK_THROWS_AS(channel_from_string("tertiary"), ConfigError);
    }

    TEST_CASE("splitting angle of a reflected tangent")
    {
        // A tangent along the symmetry axis is its own reflection.
        const auto [phi, oriented] = splitting_angle(Eigen::Vector2d(1.0, 0.0), Channel::Pri);
        CHECK(phi >= 0.0);
        CHECK(phi <= M_PI);
        CHECK(std::abs(oriented) == doctest::Approx(phi));
    }

    TEST_CASE("seed points lie on the energy level next to the fixed point")
    {
        const Model& m = test::default_model();
        const PeriodicOrbitRecord rec = solve_periodic(6e-7, m);
        const ManifoldSettings ms;
        const BranchParam bp(m, rec, Side::Unstable, -1, ms);
        for (double u : {0.0, 0.5, 1.0}) {
            const PoincareState s = bp.seed(u);
            CHECK(eval_Hcp(s, m) == doctest::Approx(6e-7).epsilon(1e-12));
            const double r = std::hypot(s.xi, s.eta);
            CHECK(r >= 0.9 * ms.seed_dist);
            CHECK(r <= 1.1 * ms.seed_dist * rec.lambda_mult);
        }
        // One return moves the seed of u = 0 to the seed of u = 1.
        const PoincareState a = bp.step(bp.seed(0.0)), b = bp.seed(1.0);
        CHECK(std::hypot(a.xi - b.xi, a.eta - b.eta) < 1e-3 * ms.seed_dist);
    }

    TEST_CASE("primary homoclinic point at the low end of the window")
    {
        const Model& m = test::default_model();
        const PeriodicOrbitRecord rec = solve_periodic(1.7e-8, m);
        HomoclinicRecord h = find_homoclinic(m, rec, Channel::Pri);
        CHECK(h.axis_residual < 1e-12);
        CHECK(h.coord > 0.0);
        CHECK(std::abs(h.point.eta) < 1e-12);
        CHECK(eval_Hcp(h.point, m) == doctest::Approx(1.7e-8).epsilon(1e-9));
        max_eccentricity(m, rec, h);
        CHECK(std::abs(h.e_max - 0.35) < 0.03);
        CHECK(h.i_min >= 55.70 - 0.005);
        CHECK(h.i_max <= 58.18 + 0.005);

        const HomoclinicRecord hs = find_homoclinic(m, rec, Channel::Pri, {}, Side::Stable);
        CHECK(hs.coord == doctest::Approx(h.coord).epsilon(1e-9));
    }

    TEST_CASE("globalized branch respects the spacing bound")
    {
        const Model& m = test::default_model();
        const PeriodicOrbitRecord rec = solve_periodic(6e-7, m);
        const ManifoldBranch br = globalize(m, rec, Side::Unstable, -1, ManifoldSettings{}, 3);
        REQUIRE(br.points.size() > 2);
        for (std::size_t k = 1; k < br.points.size(); ++k) {
            const auto& a = br.points[k - 1].s;
            const auto& b = br.points[k].s;
            CHECK(std::hypot(a.xi - b.xi, a.eta - b.eta) <= 1e-3 * (1 + 1e-9));
        }
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("manifolds.energy_residual");
        test::require_check_passes("manifolds.stable_vs_unstable");
        test::require_check_passes("manifolds.first_crossing");
    }
}
