// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

// secres_validate: runs the registered checks and prints one report line per
// result. Exit status 1 when any selected check fails or errors.

#include "secres/constants.hpp"
#include "secres/errors.hpp"
#include "secres/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SECRES_DERIVED_GOLDENS
#define SECRES_DERIVED_GOLDENS ""
#endif

int main(int argc, char** argv)
{
    using namespace secres;
    CLI::App app{"secres_validate: golden values, invariants and flow oracles"};
    std::string filter, derived = SECRES_DERIVED_GOLDENS, out, config;
    int threads = 1;
    bool slow = false, quick = false, regen = false, list = false;
    app.add_option("--filter", filter, "run checks whose name contains this text");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--slow", slow, "include the checks that take minutes");
    app.add_flag("--quick", quick, "smaller random samples");
    app.add_option("--derived", derived, "derived golden file (empty: skip regressions)");
    app.add_flag("--regen-oracles", regen, "print regenerated derived goldens and exit");
    app.add_option("--out", out, "write the report (or regenerated goldens) to this file");
    app.add_option("--config", config, "constants file");
    app.add_flag("--list", list, "list the registered checks");
    CLI11_PARSE(app, argc, argv);

    try {
        const Model m(nondimensionalize(config.empty() ? PhysicalConstants{} : load_config_file(config)));
        std::ofstream file;
        if (!out.empty()) {
            file.open(out);
            if (!file) throw ConfigError("cannot open " + out);
        }
        std::ostream& os = out.empty() ? std::cout : file;
        if (list) {
            for (const auto& c : registered_checks())
                os << c.name << (c.slow ? " [slow]" : "") << " : " << c.description << '\n';
            return 0;
        }
        if (regen) {
            os << regenerate_derived(m);
            return 0;
        }
        ValidationContext ctx(m);
        ctx.quick = quick;
        if (!derived.empty()) {
            std::ifstream in(derived);
            if (!in) throw ConfigError("cannot read derived goldens " + derived);
            std::stringstream ss;
            ss << in.rdbuf();
            ctx.derived = parse_derived_goldens(ss.str());
        }
        const SuiteReport rep = run_suite(ctx, filter, threads, slow);
        write_report(os, rep);
        os << "# " << rep.results.size() - std::size_t(rep.failures()) << " passed, "
           << rep.failures() << " failed\n";
        return rep.failures() ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
