// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/melnikov.hpp"

#include <cmath>
#include <complex>

using namespace secres;

TEST_SUITE("melnikov")
{
    TEST_CASE("transversality combination and straightened coefficients")
    {
        const double n = 1e-4, T0 = 1.3e5, zeta = 2.1e4;
        const cplx A{0.3, -0.2}, B{-1.1, 0.4};
        const cplx dT = std::exp(cplx(0, n * T0)) - 1.0, dZ = std::exp(cplx(0, n * zeta)) - 1.0;
        const cplx f = f_ansatz(n, T0, zeta, A, B);
        CHECK(std::abs(f - (dT * B - dZ * A)) < 1e-15);
        const Straightened s = straightened_coeffs(n, T0, zeta, A, B);
        CHECK(s.B1_tilde_valid);
        CHECK(s.A1_hat_valid);
        CHECK(std::abs(s.B1_tilde - f / dT) < 1e-12);
        CHECK(std::abs(s.A1_hat + f / dZ) < 1e-12);
        // At the double resonance the B1-tilde form loses its denominator.
        CHECK_FALSE(straightened_coeffs(n, 4 * M_PI / n, zeta, A, B).B1_tilde_valid);
    }

    TEST_CASE("phase shift from blocks")
    {
        const std::vector<Block> blocks{{10.5, {}}, {10.25, {}}, {10.125, {}}};
        CHECK(zeta_from_blocks(blocks, 10.0) == doctest::Approx(0.875));
    }

    TEST_CASE("coefficients at one energy")
    {
        const Model& m = test::default_model();
        const MelnikovRecord r = compute_melnikov(m, 6e-7, Channel::Pri);
        CHECK(r.zeta_minus == doctest::Approx(-r.zeta_plus).epsilon(1e-12));
        CHECK(r.zeta == doctest::Approx(2 * r.zeta_plus));
        CHECK(std::abs(r.A1m - std::conj(r.A1p)) <= 1e-12 * std::abs(r.A1p));
        CHECK(std::abs(r.B1m - std::conj(r.B1p)) <= 1e-12 * std::abs(r.B1p));
        CHECK(std::abs(r.f_plus - f_ansatz(m.n(), r.T0, r.zeta, r.A1p, r.B1p)) <= 1e-12 * std::abs(r.f_plus));
        const cplx B = -cplx(0, 1) * m.alpha3() * (r.B1_back + std::exp(cplx(0, m.n() * r.zeta)) * r.B1_fwd);
        CHECK(std::abs(B - r.B1p) <= 1e-10 * std::abs(r.B1p));
        CHECK(r.n_blocks > 3);
        CHECK(r.J == doctest::Approx(-6e-7 / m.n()));
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("melnikov.unit_integrand");
        test::require_check_passes("oracle.A1_flow");
    }
}
