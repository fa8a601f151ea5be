// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

// Acceptance runner. Each criterion is a group of registered validation
// checks; a criterion passes when every result of every member check passes.
// One line per criterion goes to stdout, the per-result report to stderr.
// The exit status is nonzero only when a check could not be evaluated.

#include "secres/constants.hpp"
#include "secres/errors.hpp"
#include "secres/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#ifndef SECRES_DERIVED_GOLDENS
#define SECRES_DERIVED_GOLDENS ""
#endif

namespace {

using namespace secres;

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> checks;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> c = {
        {1, "boundary energies", {"golden.boundary_energies"}},
        {2, "averaged-model thresholds", {"golden.averaged_thresholds"}},
        {3, "resonance geometry", {"coords.resonance"}},
        {4, "double-resonance energy and period window", {"periodic.resonance", "periodic.window"}},
        {5, "tangency table", {"manifolds.tangencies", "manifolds.sec_angles"}},
        {6, "homoclinic eccentricity and inclination band",
         {"manifolds.eccentricity", "orbits.inclination"}},
        {7, "Melnikov outputs", {"melnikov.zeta_at_res", "melnikov.min_f", "melnikov.symmetry"}},
        {8, "first-order map oracles", {"oracle.A1_flow", "oracle.B1_flow"}},
        {9, "drift demonstration and scaling", {"diffusion.drift", "diffusion.scaling"}},
        {10, "structural suite",
         {"dynamics.energy", "dynamics.reversibility", "hamiltonians.reversibility",
          "periodic.closure", "hamiltonians.gradients", "hamiltonians.giacaglia"}},
    };
    return c;
}

// Results whose name carries this suffix were computed with a model other
// than the configured one; they are shown but do not decide the criterion.
constexpr const char* kVariantTag = "@e_M=5.49006e-03";

bool is_variant(const CheckResult& r)
{
    return r.name.find(kVariantTag) != std::string::npos;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"secres acceptance: one line per criterion"};
    std::vector<int> only;
    std::string config, derived = SECRES_DERIVED_GOLDENS;
    bool quick = false;
    app.add_option("--criterion", only, "run only these criteria (repeatable)");
    app.add_option("--config", config, "constants file");
    app.add_flag("--quick", quick, "smaller random samples");
    CLI11_PARSE(app, argc, argv);

    try {
        const Model m(
            nondimensionalize(config.empty() ? PhysicalConstants{} : load_config_file(config)));
        ValidationContext ctx(m);
        ctx.quick = quick;
        if (!derived.empty()) {
            std::ifstream in(derived);
            std::stringstream ss;
            ss << in.rdbuf();
            ctx.derived = parse_derived_goldens(ss.str());
        }

        int errors = 0, failed = 0, evaluated = 0;
        std::map<std::string, std::vector<CheckResult>> memo;
        for (const Criterion& c : criteria()) {
            if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
            const auto t0 = std::chrono::steady_clock::now();
            int n_dec = 0, n_pass = 0;
            std::string failing, variant_note;
            bool variant_all_pass = true, have_variant = false;
            for (const std::string& name : c.checks) {
                auto it = memo.find(name);
                if (it == memo.end()) {
                    std::vector<CheckResult> rs;
                    try {
                        rs = find_check(name).run(ctx);
                    } catch (const std::exception& e) {
                        CheckResult r;
                        r.name = name;
                        r.status = Status::Error;
                        r.detail = e.what();
                        rs.push_back(r);
                    }
                    it = memo.emplace(name, std::move(rs)).first;
                }
                for (const CheckResult& r : it->second) {
                    std::cerr << "  [" << c.id << "] " << r.name << ' ' << to_string(r.status)
                              << " measured=" << r.measured << " expected=" << r.expected
                              << " tol=" << r.tol << (r.detail.empty() ? "" : " # " + r.detail)
                              << '\n';
                    if (r.status == Status::Error) ++errors;
                    if (is_variant(r)) {
                        have_variant = true;
                        variant_all_pass = variant_all_pass && r.status == Status::Pass;
                        continue;
                    }
                    ++n_dec;
                    if (r.status == Status::Pass) {
                        ++n_pass;
                    } else {
                        failing += (failing.empty() ? "" : ",") + r.name;
                    }
                }
            }
            if (have_variant)
                variant_note = std::string("; with e_M = 0.00549006 all ") +
                               (variant_all_pass ? "pass" : "do not pass");
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const bool pass = n_dec > 0 && n_pass == n_dec;
            ++evaluated;
            if (!pass) ++failed;
            std::ostringstream line;
            line << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.title
                 << "  (" << n_pass << '/' << n_dec << " results pass" << variant_note;
            if (!failing.empty()) line << "; failing: " << failing;
            line << ") [" << std::fixed << std::setprecision(1) << secs << " s]";
            std::cout << line.str() << std::endl;
        }
        std::cout << "# " << evaluated - failed << " of " << evaluated << " criteria pass"
                  << (errors ? ", " + std::to_string(errors) + " evaluation errors" : "") << '\n';
        return errors ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
