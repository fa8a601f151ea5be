// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#include "test_support.hpp"

#include "secres/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

using namespace secres;

TEST_SUITE("validation")
{
    TEST_CASE("published goldens carry citations")
    {
        std::set<std::string> names;
        for (const GoldenValue& g : published_goldens()) {
            CAPTURE(g.name);
            CHECK(names.insert(g.name).second);
            if (g.provenance == Provenance::Published) CHECK_FALSE(g.citation.empty());
            CHECK(g.tolerance > 0.0);
        }
        CHECK(names.count("E1") == 1);
        CHECK(names.count("E2") == 1);
    }

    TEST_CASE("derived golden parser")
    {
        const auto g = parse_derived_goldens("# header\nT0@1e-7 140000.5 1e-6 rel\n\nlam 1.9 1e-9 abs\n");
        REQUIRE(g.size() == 2);
        CHECK(g[0].name == "T0@1e-7");
        CHECK(g[0].relative);
        CHECK(g[0].provenance == Provenance::Derived);
        CHECK(g[1].value == 1.9);
        CHECK_FALSE(g[1].relative);
        CHECK_THROWS_AS(parse_derived_goldens("broken line\n"), ConfigError);
    }

    TEST_CASE("compare and upper bound")
    {
        CHECK(compare("a", 1.0 + 1e-10, 1.0, 1e-9).status == Status::Pass);
        CHECK(compare("a", 1.1, 1.0, 1e-9).status == Status::Fail);
        CHECK(compare("a", 101.0, 100.0, 0.02, true).status == Status::Pass);
        CHECK(compare("a", std::nan(""), 1.0, 1.0).status == Status::Fail);
        CHECK(upper_bound("b", 0.5, 1.0).status == Status::Pass);
        CHECK(upper_bound("b", 2.0, 1.0).status == Status::Fail);
    }

    TEST_CASE("registry")
    {
        std::set<std::string> names;
        for (const Check& c : registered_checks()) CHECK(names.insert(c.name).second);
        CHECK(find_check("coords.resonance").name == "coords.resonance");
        CHECK_THROWS_AS(find_check("no.such.check"), ConfigError);
    }

    TEST_CASE("suite runner and report")
    {
        ValidationContext ctx(test::default_model());
        const SuiteReport r = run_suite(ctx, "constants.");
        CHECK(r.results.size() >= 2);
        CHECK(r.failures() == 0);
        std::ostringstream os;
        write_report(os, r);
        std::size_t lines = 0;
        for (char c : os.str()) lines += c == '\n';
        CHECK(lines == r.results.size());
        CHECK(os.str().find("PASS") != std::string::npos);
        // Slow checks are skipped unless requested.
        CHECK(run_suite(ctx, "diffusion.drift").results.empty());
    }

    TEST_CASE("derived regressions")
    {
        std::ifstream in(SECRES_DERIVED_GOLDENS);
        REQUIRE(in.good());
        std::stringstream ss;
        ss << in.rdbuf();
        ValidationContext ctx(test::default_model());
        ctx.derived = parse_derived_goldens(ss.str());
        CHECK_FALSE(ctx.derived.empty());
        for (const CheckResult& r : find_check("derived.regressions").run(ctx)) {
            INFO(r.name << " " << r.measured << " vs " << r.expected);
            CHECK(r.status == Status::Pass);
        }
    }
}
