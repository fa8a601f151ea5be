// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/errors.hpp"

#include <cmath>

using namespace secres;

TEST_SUITE("constants")
{
    TEST_CASE("alpha is the exact semi-major axis ratio")
    {
        const ModelParams p = nondimensionalize(PhysicalConstants{});
        CHECK(p.alpha == doctest::Approx(29600.0 / 384400.0).epsilon(1e-15));
        CHECK(p.L == 1.0);
    }

    TEST_CASE("node frequency follows from the Saros period")
    {
        const ModelParams p = nondimensionalize(PhysicalConstants{});
        const double tu = std::sqrt(std::pow(29600.0, 3) / 398600.44);
        CHECK(p.time_unit_s == doctest::Approx(tu).epsilon(1e-14));
        CHECK(p.n_OmegaM == doctest::Approx(2 * M_PI * tu / (6585.321347 * 86400.0)).epsilon(1e-14));
        CHECK(p.n_OmegaM == doctest::Approx(8.9075e-5).epsilon(1e-4));
    }

    TEST_CASE("dimensionalize inverts nondimensionalize")
    {
        PhysicalConstants c;
        c.a_sat = 26000.0;
        c.e_M = 0.03;
        const PhysicalConstants back = dimensionalize(nondimensionalize(c));
        CHECK(back.a_sat == doctest::Approx(c.a_sat).epsilon(1e-13));
        CHECK(back.mu_M == doctest::Approx(c.mu_M).epsilon(1e-13));
        CHECK(back.T_saros == doctest::Approx(c.T_saros).epsilon(1e-13));
        CHECK(back.e_M == doctest::Approx(c.e_M).epsilon(1e-12));
    }

    TEST_CASE("config text round trip")
    {
        PhysicalConstants c;
        c.e_M = 0.00549006;
        c.giacaglia = "closed";
        const PhysicalConstants d = parse_config(serialize_config(c));
        CHECK(serialize_config(d) == serialize_config(c));
        CHECK(d.e_M == c.e_M);
        CHECK(d.giacaglia == "closed");
    }

    TEST_CASE("config errors")
    {
        CHECK_THROWS_AS(parse_config("no_such_key = 1"), ConfigError);
        CHECK_THROWS_AS(parse_config("mu = abc"), ConfigError);
        CHECK_THROWS_AS(nondimensionalize(parse_config("giacaglia = rounded")), ConfigError);
        PhysicalConstants c;
        c.a_sat = 6000.0;
        CHECK_THROWS_AS(nondimensionalize(c), ConfigError);
        c = PhysicalConstants{};
        c.mu = -1.0;
        CHECK_THROWS_AS(nondimensionalize(c), ConfigError);
        CHECK(parse_config("# comment\n\n  e_M = 0.01  \n").e_M == 0.01);
    }

    TEST_CASE("structural checks") { test::require_check_passes("constants.roundtrip"); }
}
