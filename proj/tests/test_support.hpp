// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/constants.hpp"
#include "secres/hamiltonians.hpp"
#include "secres/validation.hpp"

#include <doctest.h>

#include <string>

namespace secres::test {

/// Model built from the default constants, shared by all test cases.
inline const Model& default_model()
{
    static const Model m(nondimensionalize(PhysicalConstants{}));
    return m;
}

/// Same model with e_M = 0.00549006 in the lunar coefficient.
inline const Model& small_eccentricity_model()
{
    static const Model m([] {
        PhysicalConstants c;
        c.e_M = 0.00549006;
        return nondimensionalize(c);
    }());
    return m;
}

/// Runs a registered validation check and requires every result to pass,
/// except results whose name contains `allowed_failure` (if non-empty).
inline void require_check_passes(const std::string& name, const std::string& allowed_failure = {})
{
    ValidationContext ctx(default_model());
    ctx.quick = true;
    const auto results = find_check(name).run(ctx);
    REQUIRE_FALSE(results.empty());
    for (const auto& r : results) {
        if (!allowed_failure.empty() && r.name.find(allowed_failure) != std::string::npos) continue;
        INFO(r.name << " measured " << r.measured << " expected " << r.expected << " tol " << r.tol
                    << " " << r.detail);
        CHECK(r.status == Status::Pass);
    }
}

} // namespace secres::test
