#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavecrit/claims.hpp"
#include "wavecrit/diagnostics.hpp"
#include "wavecrit/errors.hpp"
#include "wavecrit/exponents.hpp"
#include "wavecrit/gronwall.hpp"
#include "wavecrit/io.hpp"
#include "wavecrit/littlewood_paley.hpp"
#include "wavecrit/propagator.hpp"
#include "wavecrit/solver.hpp"

// Command-line driver.
//
// Exit codes:
//   0  success
//   1  usage error (bad flags, unknown subcommand)
//   2  configuration error (malformed or invalid config, parameters outside a domain)
//   3  numerical failure (truncated run, no fixed point, CFL violation)
//   4  verification failure (a checked claim or bound did not hold)
//   5  I/O error

namespace wavecrit::cli {

using json = nlohmann::json;

enum ExitCode : int { Ok = 0, Usage = 1, Config = 2, Numerical = 3, Verification = 4, Io = 5 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// WAVECRIT_THREADS must be a positive integer when set. The library is single-threaded,
/// so the value only caps at 1.
inline int thread_cap() {
    const char* v = std::getenv("WAVECRIT_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("WAVECRIT_THREADS must be a positive integer");
    return 1;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        io::write_atomic(path, text);
}

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("wrong type for '" + std::string(key) + "' in " + where);
    }
}

inline std::pair<int, int> parse_dim_range(const std::string& text) {
    for (const char* sep : {"..", ":", "-"}) {
        auto pos = text.find(sep, 1);
        if (pos == std::string::npos) continue;
        try {
            return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + std::string(sep).size()))};
        } catch (const std::exception&) {
            throw ConfigError("malformed dimension range '" + text + "'");
        }
    }
    try {
        int d = std::stoi(text);
        return {d, d};
    } catch (const std::exception&) {
        throw ConfigError("malformed dimension range '" + text + "'");
    }
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("malformed number '" + item + "' in list");
        }
    }
    return out;
}

inline RealField band_limited_field(const GridSpec& g, int kmax, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    RealField f(g);
    for (auto& v : f.data) v = nd(rng);
    auto F = spectral::forward_transform(f);
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < F.size(); ++i) {
        g.unflatten(i, idx.data());
        for (int a = 0; a < g.d; ++a)
            if (std::abs(g.freq_index(idx[a])) >= kmax) F.coef[i] = 0.0;
    }
    return spectral::inverse_transform(F);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Run configuration

struct InitialSpec {
    std::string kind = "gaussian";
    double amplitude = 1.0;
    double width = 1.0;
    double velocity = 0.0;
    std::vector<double> center;
    std::vector<int> k;
    std::string u_path, ut_path;
};

struct DiagnosticsSpec {
    bool enabled = false;
    int every = 0;  // 0: follow outputs.snapshots_every
    double eta_frequency = 0.1;
    double soliton_factor = 2.0;
    double cascade_factor = 8.0;
};

struct RunConfig {
    int dim = 2;
    int n = 64;
    double box = 2.0 * std::numbers::pi;
    solver::SolverConfig solver;
    InitialSpec initial;
    DiagnosticsSpec diagnostics;
    std::string series_csv = "series.csv";
    std::string diagnostics_csv = "diagnostics.csv";
    std::string summary_json = "summary.json";
    std::string snapshot_dir;
    json canonical;

    GridSpec grid() const { return GridSpec(dim, n, box); }
};

/// Parses and validates a run configuration. Unknown keys at any level are rejected.
inline RunConfig parse_run_config(const json& j) {
    detail::check_keys(j, {"dim", "n", "box", "dt", "quad_nodes", "picard_tol", "picard_max", "horizon", "dealias",
                           "sign", "initial", "outputs", "diagnostics"},
                       "config");
    RunConfig c;
    const std::string top = "config";
    if (!j.contains("dim") || !j.contains("n")) throw ConfigError("config needs 'dim' and 'n'");
    c.dim = detail::get_or<int>(j, "dim", c.dim, top);
    c.n = detail::get_or<int>(j, "n", c.n, top);
    c.box = detail::get_or<double>(j, "box", c.box, top);
    c.solver.dt = detail::get_or<double>(j, "dt", c.solver.dt, top);
    c.solver.quad_nodes = detail::get_or<int>(j, "quad_nodes", c.solver.quad_nodes, top);
    c.solver.picard_tol = detail::get_or<double>(j, "picard_tol", c.solver.picard_tol, top);
    c.solver.picard_max = detail::get_or<int>(j, "picard_max", c.solver.picard_max, top);
    c.solver.T = detail::get_or<double>(j, "horizon", c.solver.T, top);
    c.solver.dealias = detail::get_or<bool>(j, "dealias", c.solver.dealias, top);
    c.solver.sign = detail::get_or<int>(j, "sign", c.solver.sign, top);
    c.solver.snapshot_every = 10;

    if (j.contains("initial")) {
        const json& ini = j.at("initial");
        const std::string where = "initial";
        if (!ini.is_object() || !ini.contains("kind")) throw ConfigError("initial needs a 'kind'");
        c.initial.kind = detail::get_or<std::string>(ini, "kind", "", where);
        if (c.initial.kind == "gaussian") {
            detail::check_keys(ini, {"kind", "amplitude", "width", "velocity", "center"}, where);
            c.initial.center = detail::get_or<std::vector<double>>(ini, "center", {}, where);
        } else if (c.initial.kind == "mode") {
            detail::check_keys(ini, {"kind", "amplitude", "velocity", "k"}, where);
            c.initial.k = detail::get_or<std::vector<int>>(ini, "k", {}, where);
            if (static_cast<int>(c.initial.k.size()) != c.dim) throw ConfigError("initial.k needs one entry per axis");
        } else if (c.initial.kind == "file") {
            detail::check_keys(ini, {"kind", "u", "ut"}, where);
            c.initial.u_path = detail::get_or<std::string>(ini, "u", "", where);
            c.initial.ut_path = detail::get_or<std::string>(ini, "ut", "", where);
            if (c.initial.u_path.empty()) throw ConfigError("initial kind 'file' needs 'u'");
        } else {
            throw ConfigError("unknown initial kind '" + c.initial.kind + "'");
        }
        c.initial.amplitude = detail::get_or<double>(ini, "amplitude", c.initial.amplitude, where);
        c.initial.width = detail::get_or<double>(ini, "width", c.initial.width, where);
        c.initial.velocity = detail::get_or<double>(ini, "velocity", c.initial.velocity, where);
        if (!c.initial.center.empty() && static_cast<int>(c.initial.center.size()) != c.dim)
            throw ConfigError("initial.center needs one entry per axis");
        if (!(c.initial.width > 0.0)) throw ConfigError("initial.width must be positive");
    }

    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        detail::check_keys(o, {"series_csv", "snapshots_every", "diagnostics_csv", "summary_json", "snapshot_dir"},
                           "outputs");
        c.series_csv = detail::get_or<std::string>(o, "series_csv", c.series_csv, "outputs");
        c.solver.snapshot_every = detail::get_or<int>(o, "snapshots_every", c.solver.snapshot_every, "outputs");
        c.diagnostics_csv = detail::get_or<std::string>(o, "diagnostics_csv", c.diagnostics_csv, "outputs");
        c.summary_json = detail::get_or<std::string>(o, "summary_json", c.summary_json, "outputs");
        c.snapshot_dir = detail::get_or<std::string>(o, "snapshot_dir", c.snapshot_dir, "outputs");
    }

    if (j.contains("diagnostics")) {
        const json& dj = j.at("diagnostics");
        const std::string where = "diagnostics";
        detail::check_keys(dj, {"enabled", "every", "eta_frequency", "soliton_factor", "cascade_factor"}, where);
        c.diagnostics.enabled = detail::get_or<bool>(dj, "enabled", true, where);
        c.diagnostics.every = detail::get_or<int>(dj, "every", c.diagnostics.every, where);
        c.diagnostics.eta_frequency = detail::get_or<double>(dj, "eta_frequency", c.diagnostics.eta_frequency, where);
        c.diagnostics.soliton_factor = detail::get_or<double>(dj, "soliton_factor", c.diagnostics.soliton_factor, where);
        c.diagnostics.cascade_factor = detail::get_or<double>(dj, "cascade_factor", c.diagnostics.cascade_factor, where);
        if (c.diagnostics.every < 0) throw ConfigError("diagnostics.every must be >= 0");
    }

    try {
        c.grid();
        c.solver.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    c.canonical = j;
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const io::IoError& e) {
        throw ConfigError(e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

inline StatePair build_initial(const RunConfig& c) {
    const GridSpec g = c.grid();
    const auto& ini = c.initial;
    if (ini.kind == "file") {
        RealField u = io::read_snapshot(ini.u_path);
        RealField ut = ini.ut_path.empty() ? RealField(g) : io::read_snapshot(ini.ut_path);
        if (!(u.grid == g) || !(ut.grid == g)) throw ConfigError("snapshot grid does not match the config grid");
        return StatePair(u, ut);
    }
    if (ini.kind == "mode") {
        auto wave = RealField::sample(g, [&](const double* x) {
            double ph = 0.0;
            for (int a = 0; a < g.d; ++a) ph += ini.k[a] * x[a];
            return std::cos(g.dxi() * ph);
        });
        return StatePair(ini.amplitude * wave, ini.velocity * wave);
    }
    std::vector<double> c0 = ini.center.empty() ? std::vector<double>(g.d, 0.0) : ini.center;
    auto bump = RealField::sample(g, [&](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) r2 += (x[a] - c0[a]) * (x[a] - c0[a]);
        return std::exp(-r2 / (ini.width * ini.width));
    });
    return StatePair(ini.amplitude * bump, ini.velocity * bump);
}

// ---------------------------------------------------------------------------
// Simulation pipeline

struct RunResult {
    Trajectory trajectory;
    std::vector<diagnostics::AlmostPeriodicityRecord> ap_records;
    std::vector<double> ap_energy, ap_morawetz;
    std::string verdict;
    json summary;
};

inline std::string series_csv(const Trajectory& traj) {
    std::string s = "t,energy,hs_crit,hs_crit_minus1_ut,l_dplus1_accum,morawetz_accum,picard_iters,residual\n";
    for (const auto& r : traj.records) {
        s += detail::num(r.t) + "," + detail::num(r.energy) + "," + detail::num(r.hs_crit) + "," +
             detail::num(r.hs_crit_minus1_ut) + "," + detail::num(r.l_dplus1_accum) + "," +
             detail::num(r.morawetz_accum) + "," + std::to_string(r.picard_iters) + "," + detail::num(r.residual) + "\n";
    }
    return s;
}

inline std::string diagnostics_csv(const RunResult& res, int d) {
    std::string s = "t,N_t";
    for (int a = 0; a < d; ++a) s += ",x_t_" + std::to_string(a);
    s += ",C_eta_0.1,C_eta_0.01,energy,morawetz_accum\n";
    for (std::size_t i = 0; i < res.ap_records.size(); ++i) {
        const auto& r = res.ap_records[i];
        s += detail::num(r.t) + "," + detail::num(r.N_t);
        for (int a = 0; a < d; ++a) s += "," + detail::num(r.x_t.empty() ? NAN : r.x_t[a]);
        auto c = [&](double eta) {
            auto it = r.C_eta.find(eta);
            return it == r.C_eta.end() ? NAN : it->second;
        };
        s += "," + detail::num(c(0.1)) + "," + detail::num(c(0.01)) + "," + detail::num(res.ap_energy[i]) + "," +
             detail::num(res.ap_morawetz[i]) + "\n";
    }
    return s;
}

/// Evolves the configured data and collects records. Writes nothing.
inline RunResult run_simulation(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const int threads = detail::thread_cap();
    StatePair s0 = build_initial(cfg);
    RunResult res;
    const int every = cfg.diagnostics.every > 0 ? cfg.diagnostics.every : cfg.solver.snapshot_every;
    std::vector<std::size_t> ap_steps;
    diagnostics::ApOptions ap;
    ap.eta_frequency = cfg.diagnostics.eta_frequency;
    long step = 0;
    auto observer = [&](double t, const StatePair& s) {
        if (cfg.diagnostics.enabled && step % every == 0) {
            diagnostics::AlmostPeriodicityRecord r;
            try {
                r = diagnostics::almost_periodicity_record(s, t, ap);
            } catch (const DomainError&) {
                r.t = t;
                r.N_t = NAN;
            }
            res.ap_records.push_back(r);
            ap_steps.push_back(static_cast<std::size_t>(step));
        }
        ++step;
    };
    res.trajectory = solver::evolve(s0, cfg.solver, observer);
    const auto& traj = res.trajectory;
    for (std::size_t k : ap_steps) {
        res.ap_energy.push_back(traj.records[k].energy);
        res.ap_morawetz.push_back(traj.records[k].morawetz_accum);
    }

    res.verdict = "disabled";
    if (cfg.diagnostics.enabled) {
        std::vector<diagnostics::AlmostPeriodicityRecord> valid;
        for (const auto& r : res.ap_records)
            if (std::isfinite(r.N_t)) valid.push_back(r);
        if (valid.size() >= 10) {
            diagnostics::ClassifierThresholds th{cfg.diagnostics.soliton_factor, cfg.diagnostics.cascade_factor};
            res.verdict = diagnostics::classify_scenario(valid, traj.truncated, th);
        } else {
            res.verdict = traj.truncated ? "finite-time" : "insufficient-records";
        }
    }

    const auto& first = traj.records.front();
    const auto& last = traj.records.back();
    double e0 = first.energy;
    double drift = 0.0;
    int max_iters = 0;
    double max_res = 0.0;
    for (const auto& r : traj.records) {
        drift = std::max(drift, std::abs(r.energy - e0) / std::max(std::abs(e0), 1e-300));
        max_iters = std::max(max_iters, r.picard_iters);
        max_res = std::max(max_res, r.residual);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json& sm = res.summary;
    sm["config_hash"] = detail::hex64(detail::fnv1a(cfg.canonical.dump()));
    sm["wall_time_s"] = wall;
    sm["threads"] = threads;
    sm["truncated"] = traj.truncated;
    sm["truncation_reason"] = traj.truncation_reason;
    sm["steps_completed"] = static_cast<long>(traj.records.size()) - 1;
    sm["steps_requested"] = cfg.solver.steps();
    sm["final"] = {{"t", last.t},
                   {"energy", finite_or_null(last.energy)},
                   {"hs_crit", finite_or_null(last.hs_crit)},
                   {"hs_crit_minus1_ut", finite_or_null(last.hs_crit_minus1_ut)},
                   {"l_dplus1_accum", finite_or_null(last.l_dplus1_accum)},
                   {"morawetz_accum", finite_or_null(last.morawetz_accum)}};
    sm["energy_drift"] = finite_or_null(drift);
    sm["max_picard_iters"] = max_iters;
    sm["max_residual"] = max_res;
    sm["classifier"] = res.verdict;
    sm["checks"] = {{"completed", !traj.truncated},
                    {"picard_within_tolerance", max_res <= cfg.solver.picard_tol},
                    {"energy_drift_below_1e-6", drift <= 1e-6}};
    return res;
}

/// Runs the configured simulation and writes all artifacts under out_dir.
inline int simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out) {
    auto res = run_simulation(cfg);
    auto path = [&](const std::string& p) { return out_dir / p; };
    io::write_atomic(path(cfg.series_csv), series_csv(res.trajectory));
    if (cfg.diagnostics.enabled) io::write_atomic(path(cfg.diagnostics_csv), diagnostics_csv(res, cfg.dim));
    if (!cfg.snapshot_dir.empty()) {
        const auto& tr = res.trajectory;
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "u_%06zu.bin", i);
            io::write_snapshot(path(cfg.snapshot_dir) / name, tr.states[i].u);
            std::snprintf(name, sizeof name, "ut_%06zu.bin", i);
            io::write_snapshot(path(cfg.snapshot_dir) / name, tr.states[i].ut);
        }
    }
    io::write_atomic(path(cfg.summary_json), res.summary.dump(2) + "\n");
    out << "steps " << res.summary["steps_completed"] << "/" << res.summary["steps_requested"]
        << ", energy drift " << res.summary["energy_drift"] << ", classifier " << res.verdict << "\n";
    if (res.trajectory.truncated) {
        out << "truncated: " << res.trajectory.truncation_reason << "\n";
        return Numerical;
    }
    return Ok;
}

// ---------------------------------------------------------------------------
// verify-all

struct VerifyOptions {
    int d_lo = 6, d_hi = 16;
    std::string inject_bad_claim;
    std::uint64_t seed = 1;
};

inline json verify_all(const VerifyOptions& opt, std::ostream& err) {
    json checks = json::array();
    std::size_t failures = 0;
    auto add = [&](json c) {
        if (!c["passed"].get<bool>()) ++failures;
        checks.push_back(std::move(c));
    };

    std::vector<exponents::Claim> db = exponents::claim_database();
    if (!opt.inject_bad_claim.empty()) {
        bool found = false;
        for (auto& c : db) {
            if (c.id != opt.inject_bad_claim) continue;
            found = true;
            if (std::holds_alternative<exponents::AdmissibleClaim>(c.body))
                c = exponents::perturb_claim(c, Rational(1, 7));
            else
                c.expected = !c.expected;
        }
        if (!found) throw ConfigError("no claim with id '" + opt.inject_bad_claim + "'");
    }

    if (opt.d_lo > opt.d_hi) err << "warning: empty dimension range, nothing to verify\n";
    if (opt.d_lo <= opt.d_hi && opt.d_lo < 6) throw ConfigError("verify-all dimensions start at 6");

    for (int d = opt.d_lo; d <= opt.d_hi; ++d) {
        auto rep = exponents::verify_claims(db, d);
        for (const auto& r : rep.results)
            add({{"group", "exponents"}, {"d", d}, {"id", r.id}, {"passed", r.passed()}, {"residual", r.residual.str()}});

        auto [lo, hi] = exponents::decay_R_window(d);
        double R = lo.to_double() + 0.75 * (hi.to_double() - lo.to_double());
        auto e = gronwall::decay_exponents(d, R);
        double rho = std::min((d - 4) / 2.0, e.gamma - 0.01);
        const int K = std::min(40, static_cast<int>(1000.0 / e.gamma));
        auto dr = gronwall::decay_recursion_fixpoint(d, R, gronwall::decay_eta_prime_limit(d, R, rho), K, 1.0, rho);
        bool ok = dr.bound_holds && dr.majorant_holds && std::abs(dr.exponent - rho) <= 0.05;
        add({{"group", "decay-recursion"}, {"d", d}, {"id", "R=" + detail::num(R)}, {"passed", ok},
             {"exponent", dr.exponent}, {"rho", rho}});
    }

    std::mt19937_64 rng(opt.seed);
    if (opt.d_lo <= opt.d_hi) {
        std::uniform_real_distribution<double> ug(0.2, 4.0), uf(0.05, 0.95), ue(0.01, 1.0), uc(0.1, 10.0);
        int bad = 0;
        const int tuples = 100;
        for (int i = 0; i < tuples; ++i) {
            double g = ug(rng), g2 = ug(rng), rho = uf(rng) * g;
            gronwall::GronwallParams p(g, g2, uc(rng), ue(rng) * gronwall::hypothesis_threshold(g, g2, rho), rho);
            auto y = gronwall::maximal_sequence(p, 40);
            if (!gronwall::lemma_conclusion_holds(y, p) || !gronwall::gronwall_recursion_holds(y, p)) ++bad;
        }
        add({{"group", "gronwall"}, {"id", "lemma-conclusion-sweep"}, {"passed", bad == 0}, {"tuples", tuples},
             {"failures", bad}});

        GridSpec g(2, 16, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> ut(-5.0, 5.0);
        double group = 0.0, reversal = 0.0, energy = 0.0, duhamel = 0.0;
        auto field = [&] { return detail::band_limited_field(g, 8, rng); };
        auto diff = [](const StatePair& a, const StatePair& b) {
            double m = 0.0;
            for (std::size_t i = 0; i < a.u.size(); ++i)
                m = std::max({m, std::abs(a.u[i] - b.u[i]), std::abs(a.ut[i] - b.ut[i])});
            return m;
        };
        for (int i = 0; i < 20; ++i) {
            StatePair s(field(), field());
            double t1 = ut(rng), t2 = ut(rng);
            group = std::max(group, diff(propagator::evolve_linear(propagator::evolve_linear(s, t1), t2),
                                         propagator::evolve_linear(s, t1 + t2)));
            auto fwd = propagator::evolve_linear(s, t1);
            fwd.ut *= -1.0;
            auto back = propagator::evolve_linear(fwd, t1);
            back.ut *= -1.0;
            reversal = std::max(reversal, diff(back, s));
            auto e0 = propagator::linear_energy_per_mode(s);
            auto e1 = propagator::linear_energy_per_mode(propagator::evolve_linear(s, t2));
            for (std::size_t k = 0; k < e0.size(); ++k)
                energy = std::max(energy, std::abs(e1[k] - e0[k]) / std::max(1.0, e0[k]));
            duhamel = std::max(duhamel, propagator::double_duhamel_identity_check(s.u, s.ut, t1, t2));
        }
        for (auto [id, v] : {std::pair{"group-law", group}, std::pair{"time-reversal", reversal},
                             std::pair{"mode-energy", energy}, std::pair{"double-duhamel", duhamel}})
            add({{"group", "propagator"}, {"id", id}, {"passed", v <= 1e-12}, {"max_error", v}});
    }

    return {{"dim_range", {opt.d_lo, opt.d_hi}}, {"seed", opt.seed}, {"checks", checks}, {"failures", failures},
            {"passed", failures == 0}};
}

// ---------------------------------------------------------------------------
// Entry point

namespace detail {

inline int report(std::ostream& err, int code, const std::string& what) {
    err << "wavecrit: " << what << "\n";
    return code;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Pseudospectral lab for the defocusing cubic wave equation"};
    app.require_subcommand(1);

    int dim = 6, max_dim = 0;
    bool as_json = false;
    auto* c_exp = app.add_subcommand("exponents", "Check the exponent claim database at one or more dimensions");
    c_exp->add_option("--dim", dim, "Dimension (>= 6)")->required();
    c_exp->add_option("--max-dim", max_dim, "Check every dimension from --dim up to this one");
    c_exp->add_flag("--json", as_json, "Print JSON instead of a table");

    std::string q_text, r_text, s_text;
    auto* c_adm = app.add_subcommand("admissible", "Test a wave-admissible triple exactly");
    c_adm->add_option("--dim", dim)->required();
    c_adm->add_option("--q", q_text, "Time exponent (rational or 'inf')")->required();
    c_adm->add_option("--r", r_text, "Space exponent (rational)")->required();
    c_adm->add_option("--s", s_text, "Sobolev index (rational)")->required();

    std::string config_path, out_dir = ".";
    auto* c_sim = app.add_subcommand("simulate", "Run the nonlinear solver from a JSON config");
    c_sim->add_option("--config", config_path)->required();
    c_sim->add_option("--out-dir", out_dir, "Directory that relative output paths resolve against");

    int n = 64, trials = 100;
    double p = 2.0, q = 4.0, s = 1.0;
    std::uint64_t seed = 1;
    std::string out_path;
    auto* c_bern = app.add_subcommand("bernstein", "Bernstein ratios on random band-limited fields");
    c_bern->add_option("--dim", dim)->required();
    c_bern->add_option("--n", n);
    c_bern->add_option("--trials", trials);
    c_bern->add_option("--p", p);
    c_bern->add_option("--q", q);
    c_bern->add_option("--s", s);
    c_bern->add_option("--seed", seed);
    c_bern->add_option("--out", out_path, "CSV path (default stdout)");

    double tmax = 20.0, tmin = 4.0, box = 64.0;
    int points = 8;
    auto* c_decay = app.add_subcommand("decay", "Fit the dispersive decay rate of the sine propagator");
    c_decay->add_option("--dim", dim)->required();
    c_decay->add_option("--p", p)->required();
    c_decay->add_option("--tmax", tmax)->required();
    c_decay->add_option("--tmin", tmin);
    c_decay->add_option("--points", points);
    c_decay->add_option("--n", n);
    c_decay->add_option("--box", box);
    c_decay->add_option("--out", out_path);

    double gamma = 2, gamma2 = 1, C = 1, eta = 0.125, rho = 1;
    int K = 40;
    auto* c_gr = app.add_subcommand("gronwall", "Maximal solution of the discrete Gronwall recursion");
    c_gr->add_option("--gamma", gamma)->required();
    c_gr->add_option("--gamma2", gamma2)->required();
    c_gr->add_option("--C", C)->required();
    c_gr->add_option("--eta", eta)->required();
    c_gr->add_option("--rho", rho)->required();
    c_gr->add_option("--K", K);
    c_gr->add_option("--out", out_path);

    double R = 3.5, c_prime = 1.0;
    std::optional<double> rho_opt;
    auto* c_dr = app.add_subcommand("decay-recursion", "Frequency-decay recursion and its certified exponent");
    c_dr->add_option("--dim", dim)->required();
    c_dr->add_option("--R", R)->required();
    c_dr->add_option("--eta", eta)->required();
    c_dr->add_option("--K", K);
    c_dr->add_option("--Cprime", c_prime);
    c_dr->add_option("--rho", rho_opt, "Target exponent (default (d-4)/2)");
    c_dr->add_option("--out", out_path);

    std::string times_text = "2,4,6,8";
    auto* c_sc = app.add_subcommand("scatter", "Pull back stored states by the free flow and compare them");
    c_sc->add_option("--config", config_path)->required();
    c_sc->add_option("--times", times_text, "Comma-separated pull-back times");

    std::string dim_range = "6..16", inject;
    auto* c_va = app.add_subcommand("verify-all", "Run every exact and property check; nonzero exit on failure");
    c_va->add_option("--dim-range", dim_range, "Dimensions, e.g. 6..16");
    c_va->add_option("--inject-bad-claim", inject, "Corrupt one claim to confirm it is caught");
    c_va->add_option("--seed", seed);
    c_va->add_option("--out", out_path, "JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? Ok : Usage;
    }

    try {
        detail::thread_cap();

        if (c_exp->parsed()) {
            int hi = max_dim > 0 ? max_dim : dim;
            json all = json::array();
            std::size_t failures = 0;
            for (int d = dim; d <= hi; ++d) {
                auto rep = exponents::verify_paper_claims(d);
                failures += rep.failures();
                for (const auto& r : rep.results) {
                    if (as_json) {
                        all.push_back({{"d", d}, {"id", r.id}, {"formula", r.formula}, {"passed", r.passed()},
                                       {"residual", r.residual.str()}, {"detail", r.detail}});
                    } else {
                        out << "d=" << d << "  " << r.id << "  " << (r.passed() ? "pass" : "FAIL") << "  residual "
                            << r.residual.str() << "  " << r.formula << "\n";
                    }
                }
            }
            if (as_json) out << json{{"claims", all}, {"failures", failures}}.dump(2) << "\n";
            else out << failures << " failure(s)\n";
            return failures == 0 ? Ok : Verification;
        }

        if (c_adm->parsed()) {
            exponents::AdmissiblePair pair(Exponent::parse(q_text), Rational::parse(r_text), Rational::parse(s_text), dim);
            bool ok = exponents::is_wave_admissible(pair);
            out << (ok ? "admissible" : "not admissible") << "\n"
                << "scaling residual " << pair.scaling_residual().str() << "\n"
                << "gap slack " << pair.gap_slack().str() << "\n";
            return Ok;
        }

        if (c_sim->parsed()) {
            auto cfg = load_run_config(config_path);
            return simulate(cfg, out_dir, out);
        }

        if (c_bern->parsed()) {
            GridSpec g(dim, n, 2.0 * std::numbers::pi);
            std::mt19937_64 rng(seed);
            const int kmax = std::min(n / 2, 33);
            std::map<double, std::array<double, 3>> worst;
            for (int t = 0; t < trials; ++t) {
                auto f = detail::band_limited_field(g, kmax, rng);
                for (int j = 0; j <= 4; ++j) {
                    double N = std::ldexp(1.0, j);
                    if (2.0 * N > g.dxi() * (n / 2)) break;
                    auto r = lp::bernstein_ratio(f, N, p, q, s);
                    if (!r) continue;
                    auto& w = worst[N];
                    w[0] = std::max(w[0], r->lq_over_lp);
                    w[1] = std::max(w[1], r->deriv_plus);
                    w[2] = std::max(w[2], r->deriv_minus);
                }
            }
            std::string csv = "N,p,q,s,ratio\n";
            for (const auto& [N, w] : worst) {
                csv += detail::num(N) + "," + detail::num(p) + "," + detail::num(q) + ",0," + detail::num(w[0]) + "\n";
                csv += detail::num(N) + "," + detail::num(p) + "," + detail::num(p) + "," + detail::num(s) + "," +
                       detail::num(w[1]) + "\n";
                csv += detail::num(N) + "," + detail::num(p) + "," + detail::num(p) + "," + detail::num(-s) + "," +
                       detail::num(w[2]) + "\n";
            }
            detail::emit(csv, out_path, out);
            return Ok;
        }

        if (c_decay->parsed()) {
            if (!c_decay->count("--n")) n = dim == 2 ? 128 : 64;
            GridSpec g(dim, n, box);
            auto data = RealField::sample(g, [&](const double* x) {
                double r2 = 0.0;
                for (int a = 0; a < g.d; ++a) r2 += x[a] * x[a];
                return (r2 - g.d) * std::exp(-r2 / 2.0);
            });
            if (points < 2 || !(tmin > 0.0) || !(tmax > tmin)) throw ConfigError("need 0 < tmin < tmax and points >= 2");
            std::vector<double> ts;
            for (int i = 0; i < points; ++i) ts.push_back(tmin * std::pow(tmax / tmin, i / double(points - 1)));
            auto fit = propagator::dispersive_decay_fit(data, p, ts);
            std::string csv = "t,norm\n";
            for (std::size_t i = 0; i < fit.times.size(); ++i)
                csv += detail::num(fit.times[i]) + "," + detail::num(fit.norms[i]) + "\n";
            double expected = -(dim - 1) / 2.0 * (1.0 - 2.0 / p);
            csv += "# slope " + detail::num(fit.slope) + " expected " + detail::num(expected) + "\n";
            detail::emit(csv, out_path, out);
            return Ok;
        }

        if (c_gr->parsed()) {
            gronwall::GronwallParams prm(gamma, gamma2, C, eta, rho);
            bool hyp = gronwall::gronwall_hypothesis(prm);
            auto y = gronwall::maximal_sequence(prm, K);
            auto b = gronwall::lemma_envelope(y, prm);
            bool holds = gronwall::lemma_conclusion_holds(y, prm);
            std::string csv = "k,x_k,bound_k\n";
            for (std::size_t k = 0; k < y.size(); ++k)
                csv += std::to_string(k) + "," + detail::num(y[k]) + "," + detail::num(b[k]) + "\n";
            detail::emit(csv, out_path, out);
            err << "hypothesis " << (hyp ? "holds" : "fails") << ", conclusion " << (holds ? "holds" : "FAILS") << "\n";
            return holds || !hyp ? Ok : Verification;
        }

        if (c_dr->parsed()) {
            auto res = gronwall::decay_recursion_fixpoint(dim, R, eta, K, c_prime, rho_opt.value_or(NAN));
            std::string csv = "k,x_k,bound_k\n";
            for (std::size_t k = 0; k < res.sequence.size(); ++k)
                csv += std::to_string(k) + "," + detail::num(res.sequence[k]) + "," + detail::num(res.bound[k]) + "\n";
            csv += "# gamma " + detail::num(res.gamma) + " gamma2 " + detail::num(res.gamma2) + " rho " +
                   detail::num(res.rho) + " exponent " + detail::num(res.exponent) + " tail_slope " +
                   detail::num(res.tail_slope) + "\n";
            detail::emit(csv, out_path, out);
            return res.bound_holds && res.majorant_holds ? Ok : Verification;
        }

        if (c_sc->parsed()) {
            auto cfg = load_run_config(config_path);
            auto times = detail::parse_list(times_text);
            auto res = run_simulation(cfg);
            auto rep = solver::scattering_extract(res.trajectory, times);
            out << "T,difference\n";
            for (std::size_t i = 0; i < rep.differences.size(); ++i)
                out << detail::num(rep.times[i + 1]) << "," << detail::num(rep.differences[i]) << "\n";
            double ratio = rep.differences.empty() ? 0.0 : rep.differences.back() / rep.differences.front();
            out << "# monotone " << (rep.monotone ? "yes" : "no") << " final/first " << detail::num(ratio) << "\n";
            return Ok;
        }

        if (c_va->parsed()) {
            VerifyOptions opt;
            std::tie(opt.d_lo, opt.d_hi) = detail::parse_dim_range(dim_range);
            opt.inject_bad_claim = inject;
            opt.seed = seed;
            auto rep = verify_all(opt, err);
            detail::emit(rep.dump(2) + "\n", out_path, out);
            if (!rep["passed"].get<bool>()) {
                for (const auto& c : rep["checks"])
                    if (!c["passed"].get<bool>())
                        err << "FAILED " << c["group"].get<std::string>() << " " << c["id"].get<std::string>()
                            << (c.contains("d") ? " d=" + std::to_string(c["d"].get<int>()) : "") << "\n";
                return Verification;
            }
            return Ok;
        }
    } catch (const ConfigError& e) {
        return detail::report(err, Config, e.what());
    } catch (const io::IoError& e) {
        return detail::report(err, Io, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return detail::report(err, Io, e.what());
    } catch (const InapplicableError& e) {
        return detail::report(err, Config, std::string("inapplicable: ") + e.what());
    } catch (const HorizonError& e) {
        return detail::report(err, Config, e.what());
    } catch (const std::invalid_argument& e) {  // StructuralError and malformed literals
        return detail::report(err, Config, e.what());
    } catch (const std::domain_error& e) {  // DomainError, SingularityError, AliasingError
        return detail::report(err, Config, e.what());
    } catch (const ContractionFailure& e) {
        return detail::report(err, Numerical, e.what());
    } catch (const NoFixedPointError& e) {
        return detail::report(err, Numerical, e.what());
    } catch (const StabilityError& e) {
        return detail::report(err, Numerical, e.what());
    } catch (const UnavailableError& e) {
        return detail::report(err, Numerical, e.what());
    } catch (const NumericalFailure& e) {
        return detail::report(err, Numerical, e.what());
    }
    return Usage;
}

}  // namespace wavecrit::cli
