// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

// Oracle harness: golden values with provenance, structural invariants of
// every module, and finite-i_M flow oracles for the first-order coefficients.
// Each check is registered under a dotted name and can be run alone.

#include "secres/diffusion.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace secres {

enum class Provenance { Published, Derived, Trivial };
std::string to_string(Provenance p);

struct GoldenValue {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    Provenance provenance = Provenance::Trivial;
    std::string citation;   ///< required for Published entries
    bool relative = false;  ///< tolerance is relative to |value|
};

/// Published reference values.
const std::vector<GoldenValue>& published_goldens();

/// Regression values produced by this code (`--regen-oracles`), read from
/// `key value tol` lines. Lines starting with '#' are comments.
std::vector<GoldenValue> parse_derived_goldens(const std::string& text);

enum class Status { Pass, Fail, Error };
std::string to_string(Status s);

struct CheckResult {
    std::string name;
    Status status = Status::Error;
    double measured = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    std::string detail;
};

/// Compares against |measured - expected| <= tol (or tol * |expected|).
CheckResult compare(const std::string& name, double measured, double expected, double tol,
                    bool relative = false, std::string detail = {});
/// Pass when measured <= bound; expected is reported as the bound.
CheckResult upper_bound(const std::string& name, double measured, double bound,
                        std::string detail = {});

/// Coefficient data at one energy, shared between oracle checks.
struct OracleData {
    PeriodicOrbitRecord rec;
    MelnikovRecord mel;
    HomoclinicTails tails;
};

/// Expensive intermediate results, computed once on first use and shared
/// by all checks of a suite run. Safe to call from several workers.
class ValidationCache {
public:
    explicit ValidationCache(const Model& m) : m_(m) {}

    const std::vector<PeriodicScanRow>& periodic_scan();   ///< 200 energies over the window
    const ResonanceLocation& resonance();
    const std::vector<Tangency>& tangencies();             ///< pri channel, 60-point scan
    const DiffusionTables& tables();                       ///< N = 61, sec bands at the tangencies
    const std::vector<OracleData>& oracle_data();          ///< at oracle_energies()

    static const std::vector<double>& oracle_energies();

private:
    const Model& m_;
    std::once_flag f_scan_, f_res_, f_tan_, f_tab_, f_orc_;
    std::vector<PeriodicScanRow> scan_;
    ResonanceLocation res_;
    std::vector<Tangency> tan_;
    DiffusionTables tab_;
    std::vector<OracleData> orc_;
};

struct ValidationContext {
    const Model& model;
    std::vector<GoldenValue> derived;   ///< empty: derived regressions are skipped
    bool quick = false;                 ///< fewer random samples
    std::shared_ptr<ValidationCache> cache;

    explicit ValidationContext(const Model& m)
        : model(m), cache(std::make_shared<ValidationCache>(m)) {}
};

struct Check {
    std::string name;
    std::string description;
    bool slow = false;   ///< minutes rather than seconds
    std::function<std::vector<CheckResult>(const ValidationContext&)> run;
};

const std::vector<Check>& registered_checks();
/// Throws ConfigError for an unknown name.
const Check& find_check(const std::string& name);

struct SuiteReport {
    std::vector<CheckResult> results;
    int failures() const;
};

/// Runs every check whose name contains `filter` (all when empty). Checks
/// are independent and are distributed over `threads` workers; exceptions
/// become Error results. Slow checks run only when `include_slow` is set.
SuiteReport run_suite(const ValidationContext& ctx, const std::string& filter = {},
                      int threads = 1, bool include_slow = false);

/// One line per result: name, status, measured, expected, tol, detail.
void write_report(std::ostream& os, const SuiteReport& r);

/// Values regenerated by `--regen-oracles`, in the derived-golden format.
std::string regenerate_derived(const Model& m);
/// Recomputes one derived quantity by key (`quantity@energy` or `quantity`).
double derived_value(const Model& m, const std::string& key);

// ---- finite-i_M flow oracles -------------------------------------------

/// One return of the extended flow from the circular orbit at h = 0 with
/// initial phase Omega; dJ compared with i_M (A1 e^{i Omega} + c.c.).
struct InnerOracle {
    double dJ = 0.0;
    double predicted = 0.0;
    double residual() const { return dJ - predicted; }
};
InnerOracle inner_oracle(const Model& m, const PeriodicOrbitRecord& rec, cplx A1p, double OmegaM,
                         double iM);

/// Homoclinic transition over K blocks on each side of the axis point:
/// the extended-flow J jump along the homoclinic orbit, minus the jumps
/// along the periodic orbit at the asymptotic phases Omega_- and
/// Omega_- + n zeta, against i_M (B1_K e^{i Omega_-} + c.c.) with B1_K the
/// K-block partial sum.
struct OuterOracle {
    double dJ = 0.0;
    double predicted = 0.0;
    cplx B1_K{};
    double residual() const { return dJ - predicted; }
};
OuterOracle outer_oracle(const Model& m, const MelnikovRecord& mel, const PeriodicOrbitRecord& rec,
                         const HomoclinicTails& tails, double Omega_minus, double iM, int K);

} // namespace secres
