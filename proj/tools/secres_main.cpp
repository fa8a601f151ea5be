// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

// secres: command-line driver for the coplanar secular model, its circular
// periodic orbits, homoclinic channels, Melnikov coefficients and the
// first-order pseudo-orbit builder.

#include "secres/constants.hpp"
#include "secres/diffusion.hpp"
#include "secres/errors.hpp"
#include "table_out.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace secres;
using cli::Table;

constexpr const char* kVersion = "secres 1.0.0";
constexpr double kPi = std::numbers::pi;
constexpr double kDeg = 180.0 / kPi;

struct Common {
    std::string config;
    std::string out;
    int threads = 1;
    bool json = false;
};

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 1) throw ConfigError("--n must be at least 1");
    if (n == 1) return {a};
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[std::size_t(k)] = a + (b - a) * double(k) / double(n - 1);
    return g;
}

PhysicalConstants load_constants(const Common& c)
{
    std::string path = c.config;
    if (path.empty())
        if (const char* env = std::getenv("SECRES_CONFIG")) path = env;
    return path.empty() ? PhysicalConstants{} : load_config_file(path);
}

class Runner {
public:
    Runner(const Common& c, std::string cmdline)
        : common_(c), constants_(load_constants(c)), model_(nondimensionalize(constants_)),
          cmdline_(std::move(cmdline)), start_(std::chrono::steady_clock::now())
    {
    }

    const Model& model() const { return model_; }
    const PhysicalConstants& constants() const { return constants_; }

    void emit(Table& t, const std::string& grid)
    {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Table out;
        out.meta("command", cmdline_);
        out.meta("config_hash", cli::fnv1a_hex(serialize_config(constants_)));
        out.meta("grid", grid);
        out.meta("output", common_.out.empty() ? "stdout" : common_.out);
        out.meta("wall_time_s", fmt::format("{:.3f}", wall));
        out.meta("tool_version", kVersion);
        for (auto& kv : t.manifest) out.manifest.push_back(kv);
        out.columns = std::move(t.columns);
        out.rows = std::move(t.rows);
        out.notes = std::move(t.notes);
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!common_.out.empty()) {
            file.open(common_.out);
            if (!file) throw ConfigError("cannot open output file " + common_.out);
            os = &file;
        }
        if (common_.json) cli::write_json(*os, out);
        else cli::write_csv(*os, out);
    }

private:
    Common common_;
    PhysicalConstants constants_;
    Model model_;
    std::string cmdline_;
    std::chrono::steady_clock::time_point start_;
};

void cmd_constants(Runner& r)
{
    Table t;
    t.columns = {"name", "value"};
    for (const auto& [k, v] : config_entries(r.constants())) t.rows.push_back({k, v});
    const ModelParams& p = r.model().params();
    t.rows.push_back({std::string("alpha"), fmt::format("{:.6f}", p.alpha)});
    t.rows.push_back({std::string("alpha_exact"), p.alpha});
    t.rows.push_back({std::string("L"), p.L});
    t.rows.push_back({std::string("rho0"), p.rho0});
    t.rows.push_back({std::string("rho1"), p.rho1});
    t.rows.push_back({std::string("n_OmegaM"), p.n_OmegaM});
    t.rows.push_back({std::string("eps_rad"), p.eps});
    t.rows.push_back({std::string("length_unit_km"), p.length_unit_km});
    t.rows.push_back({std::string("time_unit_s"), p.time_unit_s});
    t.rows.push_back({std::string("E1"), energy_E1(r.model())});
    t.rows.push_back({std::string("E2"), energy_E2(r.model())});
    r.emit(t, "none");
}

void cmd_periodic(Runner& r, double emin, double emax, int n, int threads)
{
    const Model& m = r.model();
    const auto grid = linspace(emin, emax, n);
    auto rows = scan_periodic(grid, m, {}, threads);
    std::optional<ResonanceLocation> res;
    try {
        res = find_Jres(m, {}, std::min(emin, emax), std::max(emin, emax));
    } catch (const NumericalError&) {
        // No resonance inside the requested range.
    }
    if (res) {
        PeriodicScanRow row;
        row.E = res->E_res;
        row.rec = solve_periodic(res->E_res, m);
        rows.push_back(row);
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.E < b.E; });
    }
    Table t;
    t.columns = {"E", "J", "Gamma0", "T0", "nT0_over_pi", "lambda", "kind", "i_min_deg",
                 "i_max_deg", "i_section_deg", "is_Jres", "error"};
    long failures = 0;
    for (const auto& row : rows) {
        const bool is_res = res && row.E == res->E_res;
        if (!row.rec) {
            ++failures;
            t.rows.push_back({row.E, std::string(), std::string(), std::string(), std::string(),
                              std::string(), std::string(), std::string(), std::string(),
                              std::string(), long(is_res), row.error});
            continue;
        }
        const auto& p = *row.rec;
        t.rows.push_back({p.E, p.J(m.n()), p.Gam0, p.T0, m.n() * p.T0 / kPi, p.lambda_mult,
                          std::string(p.kind == OrbitKind::Hyperbolic ? "hyperbolic" : "elliptic"),
                          p.i_min * kDeg, p.i_max * kDeg, p.i_section * kDeg, long(is_res),
                          std::string()});
    }
    if (res)
        t.notes.push_back(fmt::format("J_res = {:.12e}, E_res = {:.12e}", res->J_res, res->E_res));
    t.notes.push_back(fmt::format("failed rows: {}", failures));
    r.emit(t, fmt::format("E in [{:.6e}, {:.6e}], n = {}", emin, emax, n));
}

void cmd_manifolds(Runner& r, double E, const std::string& channel, int depth, bool scan,
                   double emin, double emax, int n, int threads)
{
    const Model& m = r.model();
    const ManifoldSettings ms;
    Table t;
    if (scan) {
        const auto grid = linspace(emin, emax, n);
        const auto tans = scan_tangencies(m, grid, Channel::Pri, ms, threads);
        t.columns = {"E_tangency", "E_lo", "E_hi", "phi_sec", "phi_pri_near"};
        for (const auto& tg : tans) {
            double phi_sec = std::nan("");
            try {
                phi_sec = find_homoclinic(m, solve_periodic(tg.E, m), Channel::Sec, ms).phi;
            } catch (const NumericalError&) {
            }
            t.rows.push_back({tg.E, tg.E_lo, tg.E_hi, phi_sec, tg.phi_near});
        }
        r.emit(t, fmt::format("tangency scan, E in [{:.6e}, {:.6e}], n = {}", emin, emax, n));
        return;
    }
    const Channel ch = channel_from_string(channel);
    if (depth < 0) throw ConfigError("--depth must be non-negative");
    const PeriodicOrbitRecord rec = solve_periodic(E, m);
    t.columns = {"kind", "n", "u", "xi", "eta", "Gamma", "h", "phi", "e_max"};
    const std::string none;
    t.rows.push_back({std::string("fixed"), 0L, 0.0, 0.0, 0.0, rec.Gam0, 0.0, none, none});
    if (depth > 0) {
        for (Side side : {Side::Unstable, Side::Stable}) {
            const auto br = globalize(m, rec, side, ms.branch_sign, ms, depth);
            const std::string kind = side == Side::Unstable ? "unstable" : "stable";
            for (const auto& pt : br.points)
                t.rows.push_back({kind, long(pt.n), pt.u, pt.s.xi, pt.s.eta, pt.s.Gam, pt.s.h,
                                  none, none});
        }
        HomoclinicRecord h = find_homoclinic(m, rec, ch, ms);
        max_eccentricity(m, rec, h, ms);
        t.rows.push_back({std::string("homoclinic"), long(h.n), h.u, h.point.xi, h.point.eta,
                          h.point.Gam, h.point.h, h.phi, h.e_max});
        t.notes.push_back(fmt::format("channel {} phi = {:.6f} e_max = {:.6f} axis_residual = {:.2e}",
                                      to_string(ch), h.phi, h.e_max, h.axis_residual));
    }
    r.emit(t, fmt::format("E = {:.6e}, channel = {}, depth = {}", E, channel, depth));
}

void cmd_melnikov(Runner& r, double emin, double emax, int n, const std::string& channel,
                  int threads)
{
    const Model& m = r.model();
    const Channel ch = channel_from_string(channel);
    std::vector<double> grid = linspace(emin, emax, n);
    std::optional<double> E_res;
    try {
        E_res = find_Jres(m, {}, std::min(emin, emax), std::max(emin, emax)).E_res;
        grid.push_back(*E_res);
        std::sort(grid.begin(), grid.end());
    } catch (const NumericalError&) {
    }
    std::vector<std::string> errors;
    const auto recs = scan_melnikov(m, grid, ch, MelnikovSettings{}, threads, &errors);
    Table t;
    t.columns = {"E", "J", "T0", "n_zeta_over_pi", "zeta_plus", "zeta_minus", "A1_re", "A1_im",
                 "B1_re", "B1_im", "f_abs", "f_arg", "phi", "n_blocks", "is_Jres", "is_min_f"};
    std::size_t imin = 0;
    double asym = 0.0;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        if (std::abs(recs[k].f_plus) < std::abs(recs[imin].f_plus)) imin = k;
        asym = std::max(asym, std::abs(recs[k].zeta_plus + recs[k].zeta_minus)
                                  / std::max(1e-300, std::abs(recs[k].zeta_plus)));
    }
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const auto& x = recs[k];
        t.rows.push_back({x.E, x.J, x.T0, m.n() * x.zeta / kPi, x.zeta_plus, x.zeta_minus,
                          x.A1p.real(), x.A1p.imag(), x.B1p.real(), x.B1p.imag(),
                          std::abs(x.f_plus), std::arg(x.f_plus), x.homoclinic.phi,
                          long(x.n_blocks), long(E_res && x.E == *E_res), long(k == imin)});
    }
    t.notes.push_back(fmt::format("zeta antisymmetry: max |zeta_+ + zeta_-| / |zeta_+| = {:.3e}", asym));
    if (!recs.empty())
        t.notes.push_back(fmt::format("min |f+| = {:.7g} at E = {:.6e}", std::abs(recs[imin].f_plus),
                                      recs[imin].E));
    for (const auto& e : errors) t.notes.push_back("failed: " + e);
    r.emit(t, fmt::format("E in [{:.6e}, {:.6e}], n = {}, channel = {}", emin, emax, n, channel));
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) {
            try {
                v.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("bad number in list: " + tok);
            }
        }
    return v;
}

struct DiffuseOptions {
    double iM = 1e-3, nu = 1e-9, delta = 1e-9;
    std::uint64_t seed = 1;
    bool scaling = false;
    int table_n = 121;
    std::string tangencies = "auto";
    long max_moves = 50'000'000;
};

void cmd_diffuse(Runner& r, const DiffuseOptions& o, int threads)
{
    const Model& m = r.model();
    TableSettings ts;
    ts.N = o.table_n;
    ts.delta_E = o.delta;
    ts.threads = threads;
    if (o.tangencies == "auto") {
        const auto grid = linspace(ts.E_lo, ts.E_hi, 60);
        for (const auto& tg : scan_tangencies(m, grid, Channel::Pri, {}, threads))
            ts.tangencies.push_back(tg.E);
    } else if (o.tangencies != "none") {
        ts.tangencies = parse_list(o.tangencies);
    }
    const DiffusionTables tab = build_tables(m, ts);
    BuilderSettings bs;
    bs.max_moves = o.max_moves;
    Table t;
    for (const auto& w : tab.warnings) t.notes.push_back("table: " + w);
    if (o.scaling) {
        const auto st = scaling_study({1e-5, 1e-4, 1e-3}, o.nu, o.delta, tab, o.seed, bs);
        t.columns = {"i_M", "steps", "reached"};
        for (const auto& p : st.points) t.rows.push_back({p.iM, p.steps, long(p.reached)});
        t.notes.push_back(fmt::format("log-log slope = {:.4f}", st.slope));
        r.emit(t, fmt::format("scaling study, table n = {}, nu = {:g}, delta = {:g}, seed = {}",
                              ts.N, o.nu, o.delta, o.seed));
        return;
    }
    const PseudoOrbit po = build_pseudo_orbit(o.iM, o.nu, o.delta, tab, o.seed, bs);
    const DriftSummary d = report_drift(po, tab);
    t.columns = {"step", "move", "J", "E", "OmegaM", "jump"};
    t.rows.push_back({0L, std::string("start"), po.points[0].J, tab.E_of(po.points[0].J),
                      po.points[0].OmegaM, 0.0});
    for (std::size_t k = 0; k < po.moves.size(); ++k) {
        const auto& z = po.points[k + 1];
        t.rows.push_back({long(k + 1), to_string(po.moves[k]), z.J, tab.E_of(z.J), z.OmegaM,
                          po.jumps[k]});
    }
    for (double Et : ts.tangencies) t.meta("tangency", fmt::format("{:.10e}", Et));
    t.notes.push_back(fmt::format("reached = {}, steps = {} (inner {}, outer {})", po.reached,
                                  d.steps, d.n_inner, d.n_outer));
    t.notes.push_back(fmt::format("E: start {:.6e} end {:.6e} span [{:.6e}, {:.6e}]", d.E_start,
                                  d.E_end, d.E_min, d.E_max));
    t.notes.push_back(fmt::format("e: start {:.4f} end {:.4f}", d.e_start, d.e_end));
    t.notes.push_back(fmt::format("i (section, deg): [{:.3f}, {:.3f}]", d.i_lo, d.i_hi));
    t.notes.push_back(fmt::format("max single-move gain {:.4e}, bound slack {:.4e}", d.max_gain,
                                  d.gain_bound_violation));
    r.emit(t, fmt::format("i_M = {:g}, nu = {:g}, delta = {:g}, seed = {}, table n = {}", o.iM,
                          o.nu, o.delta, o.seed, ts.N));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"secres: secular resonance dynamics toolkit"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "constants file (default: $SECRES_CONFIG)");
        sub->add_option("--out", common.out, "output file (default: stdout)");
        sub->add_option("--threads", common.threads, "worker threads for grid scans")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--json", common.json, "emit JSON instead of CSV");
    };

    auto* c_const = app.add_subcommand("constants", "print the model parameter table");
    add_common(c_const);

    double emin = -2.12e-7, emax = 1.36e-6;
    int n = 200;
    auto* c_per = app.add_subcommand("periodic", "circular periodic orbits across an energy grid");
    add_common(c_per);
    c_per->add_option("--emin", emin, "lower end of the energy grid");
    c_per->add_option("--emax", emax, "upper end of the energy grid");
    c_per->add_option("--n", n, "number of grid points");

    double E = 1.7e-8;
    std::string channel = "pri";
    int depth = 6;
    bool scan = false;
    int n_scan = 60;
    auto* c_man = app.add_subcommand("manifolds", "invariant manifolds and homoclinic points");
    add_common(c_man);
    c_man->add_option("--e", E, "energy H_CP");
    c_man->add_option("--channel", channel, "pri or sec");
    c_man->add_option("--depth", depth, "number of iterates of the branches");
    c_man->add_flag("--scan-tangencies", scan, "locate the pri-channel tangencies");
    c_man->add_option("--emin", emin, "lower end of the energy grid");
    c_man->add_option("--emax", emax, "upper end of the energy grid");
    c_man->add_option("--n", n_scan, "grid size of the tangency scan");

    int n_mel = 41;
    auto* c_mel = app.add_subcommand("melnikov", "phase shift and first-order coefficients");
    add_common(c_mel);
    c_mel->add_option("--emin", emin, "lower end of the energy grid");
    c_mel->add_option("--emax", emax, "upper end of the energy grid");
    c_mel->add_option("--n", n_mel, "number of grid points");
    c_mel->add_option("--channel", channel, "pri or sec");

    DiffuseOptions dopt;
    auto* c_dif = app.add_subcommand("diffuse", "first-order pseudo-orbit builder");
    add_common(c_dif);
    c_dif->add_option("--im", dopt.iM, "lunar inclination i_M [rad]")->check(CLI::NonNegativeNumber);
    c_dif->add_option("--nu", dopt.nu, "end-band width in J");
    c_dif->add_option("--delta", dopt.delta, "half-width of the sec bands in E");
    c_dif->add_option("--seed", dopt.seed, "seed of the initial phase");
    c_dif->add_flag("--scaling", dopt.scaling, "run the step-count study over i_M = 1e-5, 1e-4, 1e-3");
    c_dif->add_option("--table-n", dopt.table_n, "energy grid size of the coefficient tables");
    c_dif->add_option("--tangencies", dopt.tangencies, "auto, none, or a comma-separated list");
    c_dif->add_option("--max-moves", dopt.max_moves, "give up after this many moves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string cmdline;
    for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(i ? argv[i] : "secres");

    try {
        Runner r(common, cmdline);
        if (*c_const) cmd_constants(r);
        else if (*c_per) cmd_periodic(r, emin, emax, n, common.threads);
        else if (*c_man) cmd_manifolds(r, E, channel, depth, scan, emin, emax, n_scan, common.threads);
        else if (*c_mel) cmd_melnikov(r, emin, emax, n_mel, channel, common.threads);
        else if (*c_dif) cmd_diffuse(r, dopt, common.threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure (domain): " << e.what() << '\n';
        return 3;
    }
    return 0;
}
