// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/dynamics.hpp"
#include "secres/periodic.hpp"

#include <cmath>

using namespace secres;

TEST_SUITE("hamiltonians")
{
    TEST_CASE("boundary energies with the small lunar eccentricity")
    {
        const Model& m = test::small_eccentricity_model();
        CHECK(std::abs(energy_E2(m) - 2.477266122798186e-6) < 1e-12);
        CHECK(std::abs(energy_E1(m) - -2.515161379204321e-5) < 1e-12);
    }

    TEST_CASE("boundary energies are the Hamiltonian at the two circular points")
    {
        const Model& m = test::default_model();
        CHECK(energy_E2(m) == eval_Hcp({0, 0, 0, 0}, m));
        CHECK(energy_E1(m) == eval_Hcp({0, 0.49, 0, M_PI}, m));
        CHECK(energy_E1(m) < 0.0);
        CHECK(energy_E2(m) > 0.0);
    }

    TEST_CASE("printed Giacaglia table is the closed form truncated to six decimals")
    {
        const GiacagliaTable pr = giacaglia_printed();
        const GiacagliaTable cf = giacaglia_closed_form(23.44 * M_PI / 180.0);
        for (int mm = 0; mm <= 2; ++mm)
            for (int s = -2; s <= 2; ++s) {
                CAPTURE(mm);
                CAPTURE(s);
                CHECK(std::abs(std::trunc(cf(mm, s) * 1e6) / 1e6 - pr(mm, s)) < 1e-12);
                CHECK(std::abs(cf(mm, s) - pr(mm, s)) < 1e-6);
            }
    }

    TEST_CASE("coplanar Hamiltonian is invariant under both involutions")
    {
        const Model& m = test::default_model();
        for (const PoincareState s : {PoincareState{0.05, 0.04, 0.1, 0.7},
                                      PoincareState{-0.2, 0.1, 0.03, 2.9},
                                      PoincareState{0.3, 0.02, -0.25, -1.2}}) {
            const double H = eval_Hcp(s, m);
            CHECK(eval_Hcp(phi_h(s), m) == doctest::Approx(H).epsilon(1e-13));
            CHECK(eval_Hcp(phi_v(s), m) == doctest::Approx(H).epsilon(1e-13));
        }
    }

    TEST_CASE("gradient agrees with central differences")
    {
        const Model& m = test::default_model();
        const PoincareState s{0.05, 0.04, 0.1, 0.7};
        const auto g = grad_Hcp(s, m);
        const double hstep = 1e-6;
        for (int k = 0; k < 4; ++k) {
            PoincareState a = s, b = s;
            double* pa[4] = {&a.eta, &a.Gam, &a.xi, &a.h};
            double* pb[4] = {&b.eta, &b.Gam, &b.xi, &b.h};
            *pa[k] += hstep;
            *pb[k] -= hstep;
            const double fd = (eval_Hcp(a, m) - eval_Hcp(b, m)) / (2 * hstep);
            CAPTURE(k);
            CHECK(std::abs(fd - g[k]) <= 1e-7 * std::max(1e-8, std::abs(g[k])) + 1e-14);
        }
    }

    TEST_CASE("node rate is negative on the window")
    {
        const Model& m = test::default_model();
        for (double Gam : {0.0, 0.05, 0.2, 0.45})
            for (double h : {0.0, 1.0, 3.0})
                CHECK(grad_Hcp({0.0, Gam, 0.0, h}, m)[kGam] < 0.0);
    }

    TEST_CASE("structural checks")
    {
        test::require_check_passes("hamiltonians.reversibility");
        test::require_check_passes("hamiltonians.gradients");
        test::require_check_passes("hamiltonians.dual_forms");
    }
}
