// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/periodic.hpp"

#include <cmath>

using namespace secres;

TEST_SUITE("periodic")
{
    TEST_CASE("periodic orbit at the low end of the window")
    {
        const Model& m = test::default_model();
        const PeriodicOrbitRecord r = solve_periodic(1.7e-8, m);
        CHECK(r.kind == OrbitKind::Hyperbolic);
        CHECK(r.lambda_mult > 1.0);
        CHECK(std::abs(r.monodromy.determinant() - 1.0) < 1e-9);
        CHECK(r.T0_physical == doctest::Approx(r.T0).epsilon(1e-10));
        CHECK(eval_Hcp({0, r.Gam0, 0, 0}, m) == doctest::Approx(1.7e-8).epsilon(1e-10));
        CHECK(r.evec_u.norm() == doctest::Approx(1.0));
        CHECK(r.evec_u.y() >= 0.0);
        const double nT = m.n() * r.T0 / M_PI;
        CHECK(nT > 3.9);
        CHECK(nT < 4.15);
    }

    TEST_CASE("double resonance energy")
    {
        const Model& m = test::default_model();
        const ResonanceLocation res = find_Jres(m);
        CHECK(std::abs(res.E_res / 4.4472e-7 - 1.0) < 1e-3);
        CHECK(m.n() * periodic_period(res.E_res, m) == doctest::Approx(4 * M_PI).epsilon(1e-9));
        CHECK(res.J_res == doctest::Approx(-res.E_res / m.n()));
    }

    TEST_CASE("period increases with energy")
    {
        const Model& m = test::default_model();
        double prev = 0.0;
        for (double E : {-2.12e-7, 1e-7, 5e-7, 1e-6, 1.36e-6}) {
            const double T = periodic_period(E, m);
            CHECK(T > prev);
            prev = T;
        }
    }

    TEST_CASE("scan records failures and keeps going")
    {
        const Model& m = test::default_model();
        const auto rows = scan_periodic({1e-7, 1.0, 5e-7}, m);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].rec.has_value());
        CHECK_FALSE(rows[1].rec.has_value());
        CHECK_FALSE(rows[1].error.empty());
        CHECK(rows[2].rec.has_value());
    }

    TEST_CASE("averaged thresholds with the small lunar eccentricity")
    {
        const Model& m = test::small_eccentricity_model();
        const AveragedThresholds th = find_Gamma12(m);
        CHECK(std::abs(th.Gam1 - 0.029613649805289) < 1e-9);
        CHECK(std::abs(th.Gam2 - 0.084971418151141) < 1e-9);
        CHECK(std::abs(th.E1_av - 2.072230388690642e-6) < 1e-12);
        CHECK(std::abs(th.E2_av - -3.473759155836634e-7) < 1e-12);
        CHECK(classify_averaged(0.5 * (th.Gam1 + th.Gam2), m).kind
              != classify_averaged(0.5 * th.Gam1, m).kind);
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("periodic.closure");
        test::require_check_passes("periodic.lambda_fd");
        test::require_check_passes("periodic.resonance");
        test::require_check_passes("periodic.window");
    }
}
