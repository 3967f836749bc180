#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wavecrit/dealias.hpp"
#include "wavecrit/errors.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/littlewood_paley.hpp"
#include "wavecrit/spectral.hpp"
#include "wavecrit/trajectory.hpp"

namespace wavecrit::diagnostics {

inline double critical_index(int d) { return (d - 2) / 2.0; }

// ---------------------------------------------------------------------------
// Energy

/// E = int 1/2 |grad u|^2 + 1/2 u_t^2 + 1/4 u^4, with the gradient term taken from
/// the coefficients (exactly the lattice Hamiltonian of the spectral flow). With
/// `dealias` the quartic term is the exact integral of (P u)^4, matching the
/// Galerkin flow. `sign` scales the quartic term to match the solver's nonlinearity
/// (0 gives the free energy, -1 the focusing one).
inline double energy(const StatePair& s, bool dealias = false, int sign = 1) {
    const GridSpec& g = s.grid();
    auto U = spectral::forward_transform(s.u);
    auto xi2 = g.xi_squared();
    double grad = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) grad += xi2[i] * std::norm(U.coef[i]);
    double kin = 0.0;
    for (double v : s.ut.data) kin += v * v;
    double c4 = 0.25 * sign;
    if (sign == 0) return g.cell_volume() * (0.5 * grad + 0.5 * kin);
    if (dealias) return g.cell_volume() * (0.5 * grad + 0.5 * kin) + c4 * dealias::Padder(g).quartic_integral(U);
    double quart = 0.0;
    for (double v : s.u.data) quart += v * v * v * v;
    return g.cell_volume() * (0.5 * grad + 0.5 * kin + c4 * quart);
}

/// Pointwise energy density with a spectral gradient (Nyquist component dropped).
inline RealField energy_density(const StatePair& s) {
    const GridSpec& g = s.grid();
    auto U = spectral::forward_transform(s.u);
    RealField e(g);
    for (std::size_t i = 0; i < e.size(); ++i) {
        double u = s.u.data[i], v = s.ut.data[i];
        e.data[i] = 0.5 * v * v + 0.25 * u * u * u * u;
    }
    std::vector<int> idx(g.d);
    for (int a = 0; a < g.d; ++a) {
        SpectralField D(g);
        for (std::size_t i = 0; i < U.size(); ++i) {
            g.unflatten(i, idx.data());
            int k = g.freq_index(idx[a]);
            if (2 * k == -g.n) continue;
            D.coef[i] = U.coef[i] * std::complex<double>(0.0, k * g.dxi());
        }
        auto du = spectral::inverse_transform(D);
        for (std::size_t i = 0; i < e.size(); ++i) e.data[i] += 0.5 * du.data[i] * du.data[i];
    }
    return e;
}

// ---------------------------------------------------------------------------
// Morawetz

/// 1/|x - c| with the periodic distance. A lattice point that coincides with c
/// gets the mean of 1/|x| over its cell: 4 ln(1 + sqrt 2)/h in 2D and
/// (3 ln((sqrt 3 + 1)/(sqrt 3 - 1)) - pi/2)/h in 3D.
inline RealField morawetz_weight(const GridSpec& g, std::span<const double> center) {
    if (g.d < 2 || g.d > 3) throw DomainError("Morawetz weight implemented for d = 2, 3");
    if (static_cast<int>(center.size()) != g.d) throw StructuralError("center has wrong dimension");
    const double h = g.dx();
    const double s3 = std::sqrt(3.0);
    const double cell_mean = g.d == 2 ? 4.0 * std::log(1.0 + std::sqrt(2.0)) / h
                                      : (3.0 * std::log((s3 + 1.0) / (s3 - 1.0)) - std::numbers::pi / 2.0) / h;
    RealField w(g);
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < w.size(); ++i) {
        g.unflatten(i, idx.data());
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            double dx = std::remainder(g.coord(idx[a]) - center[a], g.L);
            r2 += dx * dx;
        }
        w.data[i] = r2 < 1e-24 * h * h ? cell_mean : 1.0 / std::sqrt(r2);
    }
    return w;
}

/// int |u|^4 / |x - c| dx for one snapshot.
inline double morawetz_density_integral(const RealField& u, const RealField& weight) {
    require_same_grid(u.grid, weight.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double v = u.data[i] * u.data[i];
        s += v * v * weight.data[i];
    }
    return s * u.grid.cell_volume();
}

/// Trapezoid-in-time accumulation of int |u|^4/|x - c| over the stored snapshots.
inline double morawetz_accumulate(const Trajectory& traj, std::span<const double> center) {
    if (traj.states.empty()) return 0.0;
    spectral::require_uniform(traj.times);
    auto w = morawetz_weight(traj.states.front().grid(), center);
    auto tw = spectral::trapezoid_weights(traj.times);
    double acc = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) acc += tw[i] * morawetz_density_integral(traj.states[i].u, w);
    return acc;
}

// ---------------------------------------------------------------------------
// Norm report

struct NormReport {
    double t = 0.0;
    double energy = 0.0;
    std::map<double, double> hs;
    std::map<double, double> lebesgue;
};

inline NormReport norm_report(const StatePair& s, double t, std::span<const double> s_list,
                              std::span<const double> p_list) {
    NormReport r;
    r.t = t;
    r.energy = energy(s);
    for (double si : s_list) r.hs[si] = spectral::sobolev_norm(s.u, si, spectral::ZeroMode::Exclude);
    for (double p : p_list) r.lebesgue[p] = spectral::lebesgue_norm(s.u, p);
    return r;
}

/// ||(u, u_t)||_{H^{s_c} x H^{s_c - 1}} with zero modes excluded.
inline double critical_norm(const StatePair& s) {
    double sc = critical_index(s.grid().d);
    double a = spectral::sobolev_norm(s.u, sc, spectral::ZeroMode::Exclude);
    double b = spectral::sobolev_norm(s.ut, sc - 1.0, spectral::ZeroMode::Exclude);
    return std::sqrt(a * a + b * b);
}

// ---------------------------------------------------------------------------
// Almost-periodicity analogues

/// |xi|^{2 s_c}|u_hat|^2 + |xi|^{2(s_c - 1)}|ut_hat|^2 per mode, zero mode dropped.
inline std::vector<double> critical_spectral_density(const StatePair& s) {
    const GridSpec& g = s.grid();
    double sc = critical_index(g.d);
    auto U = spectral::forward_transform(s.u);
    auto V = spectral::forward_transform(s.ut);
    auto xi = g.xi_norm();
    std::vector<double> m(xi.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (xi[i] == 0.0) continue;
        m[i] = std::pow(xi[i], 2.0 * sc) * std::norm(U.coef[i]) + std::pow(xi[i], 2.0 * (sc - 1.0)) * std::norm(V.coef[i]);
    }
    return m;
}

/// Smallest dyadic N with critical mass above |xi| > N at most eta of the total.
/// Returns nullopt for a state with no critical mass.
inline std::optional<double> frequency_scale(const StatePair& s, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
    const GridSpec& g = s.grid();
    auto m = critical_spectral_density(s);
    auto xi = g.xi_norm();
    double total = 0.0;
    for (double v : m) total += v;
    if (!(total > 0.0)) return std::nullopt;
    for (double N = lp::floor_dyadic(g);; N *= 2.0) {
        double tail = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (xi[i] > N) tail += m[i];
        if (tail <= eta * total) return N;
    }
}

/// Physical-space critical density ||nabla|^{s_c} u|^2 + ||nabla|^{s_c - 1} u_t|^2.
inline RealField critical_density(const StatePair& s) {
    double sc = critical_index(s.grid().d);
    auto U = spectral::forward_transform(s.u);
    auto V = spectral::forward_transform(s.ut);
    U.coef[0] = 0.0;
    V.coef[0] = 0.0;
    auto a = spectral::inverse_transform(spectral::fractional_derivative(U, sc));
    auto b = spectral::inverse_transform(spectral::fractional_derivative(V, sc - 1.0));
    RealField rho(s.grid());
    for (std::size_t i = 0; i < rho.size(); ++i) rho.data[i] = a.data[i] * a.data[i] + b.data[i] * b.data[i];
    return rho;
}

struct CenterEstimate {
    std::vector<double> x;
    double confidence = 0.0;  ///< min over axes of |first moment| / mass, in [0, 1]
    bool low_confidence = false;
};

/// Per-axis circular mean of a nonnegative density.
inline std::optional<CenterEstimate> circular_center(const RealField& rho, double low_threshold = 0.1) {
    const GridSpec& g = rho.grid;
    double total = 0.0;
    for (double v : rho.data) total += v;
    if (!(total > 0.0)) return std::nullopt;
    CenterEstimate c;
    c.confidence = 1.0;
    std::vector<int> idx(g.d);
    for (int a = 0; a < g.d; ++a) {
        std::complex<double> moment = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            g.unflatten(i, idx.data());
            moment += rho.data[i] * std::polar(1.0, 2.0 * std::numbers::pi * g.coord(idx[a]) / g.L);
        }
        double conf = std::abs(moment) / total;
        c.confidence = std::min(c.confidence, conf);
        c.x.push_back(g.L * std::arg(moment) / (2.0 * std::numbers::pi));
    }
    c.low_confidence = c.confidence < low_threshold;
    return c;
}

inline std::optional<CenterEstimate> spatial_center(const StatePair& s, double low_threshold = 0.1) {
    return circular_center(critical_density(s), low_threshold);
}

struct CompactnessRadius {
    double radius = 0.0;         ///< physical radius
    double scaled = 0.0;         ///< radius * N_t
    bool saturated = false;      ///< radius reached the inscribed ball of the box
};

/// Smallest radius about x_t with exterior critical mass at most eta of the total.
inline CompactnessRadius compactness_modulus(const StatePair& s, double eta, double N_t, std::span<const double> x_t) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
    if (!(N_t > 0.0)) throw DomainError("N_t must be positive");
    const GridSpec& g = s.grid();
    if (static_cast<int>(x_t.size()) != g.d) throw StructuralError("center has wrong dimension");
    auto rho = critical_density(s);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rho.size());
    double total = 0.0;
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        g.unflatten(i, idx.data());
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            double dx = std::remainder(g.coord(idx[a]) - x_t[a], g.L);
            r2 += dx * dx;
        }
        pts.emplace_back(std::sqrt(r2), rho.data[i]);
        total += rho.data[i];
    }
    if (!(total > 0.0)) throw DomainError("compactness modulus of a state with no critical mass");
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double outside = 0.0;
    double radius = 0.0;
    for (const auto& [r, w] : pts) {
        if (outside + w > eta * total) {
            radius = r;
            break;
        }
        outside += w;
    }
    CompactnessRadius out;
    out.radius = radius;
    out.scaled = radius * N_t;
    out.saturated = radius >= g.L / 2.0;
    return out;
}

struct AlmostPeriodicityRecord {
    double t = 0.0;
    double N_t = 0.0;
    std::vector<double> x_t;
    std::map<double, double> C_eta;  ///< eta -> radius in units of 1/N_t
    bool saturated = false;
};

struct ApOptions {
    double eta_frequency = 0.1;
    std::vector<double> etas{0.1, 0.01};
};

inline AlmostPeriodicityRecord almost_periodicity_record(const StatePair& s, double t, const ApOptions& opts = {}) {
    auto N = frequency_scale(s, opts.eta_frequency);
    auto x = spatial_center(s);
    if (!N || !x) throw DomainError("almost-periodicity record of a zero state");
    AlmostPeriodicityRecord r;
    r.t = t;
    r.N_t = *N;
    r.x_t = x->x;
    for (double eta : opts.etas) {
        auto c = compactness_modulus(s, eta, r.N_t, r.x_t);
        r.C_eta[eta] = c.scaled;
        r.saturated = r.saturated || c.saturated;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Finite speed of propagation

struct FiniteSpeedReport {
    bool passed = true;
    double worst_fraction = 0.0;  ///< largest exterior energy fraction seen
    double worst_time = 0.0;
};

/// Energy fraction outside B(center, r0 + t + 2 dx) must stay at most tol for every
/// stored snapshot, the t = 0 snapshot included.
inline FiniteSpeedReport finite_speed_check(const Trajectory& traj, double r0, double tol,
                                            std::span<const double> center = {}) {
    FiniteSpeedReport rep;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const StatePair& s = traj.states[k];
        const GridSpec& g = s.grid();
        double t = traj.times[k] - traj.times.front();
        double R = r0 + t + 2.0 * g.dx();
        auto e = energy_density(s);
        double total = 0.0, outside = 0.0;
        std::vector<int> idx(g.d);
        for (std::size_t i = 0; i < e.size(); ++i) {
            g.unflatten(i, idx.data());
            double r2 = 0.0;
            for (int a = 0; a < g.d; ++a) {
                double c = center.empty() ? 0.0 : center[a];
                double dx = std::remainder(g.coord(idx[a]) - c, g.L);
                r2 += dx * dx;
            }
            total += e.data[i];
            if (r2 > R * R) outside += e.data[i];
        }
        double frac = total > 0.0 ? outside / total : 0.0;
        if (frac > rep.worst_fraction) {
            rep.worst_fraction = frac;
            rep.worst_time = traj.times[k];
        }
    }
    rep.passed = rep.worst_fraction <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Scenario classification

struct ClassifierThresholds {
    double soliton_factor = 2.0;
    double cascade_factor = 8.0;
};

/// Heuristic label from N(t): "finite-time" for truncated runs, "soliton-like" when
/// max/min N stays within the soliton factor, "cascade-like" when N never drops
/// below its initial value and max/min reaches the cascade factor, else "unclassified".
inline std::string classify_scenario(const std::vector<AlmostPeriodicityRecord>& records, bool truncated,
                                     const ClassifierThresholds& th = {}) {
    if (records.size() < 10) throw DomainError("classification needs at least 10 records");
    if (truncated) return "finite-time";
    double lo = records.front().N_t, hi = records.front().N_t;
    for (const auto& r : records) {
        lo = std::min(lo, r.N_t);
        hi = std::max(hi, r.N_t);
    }
    if (hi <= th.soliton_factor * lo) return "soliton-like";
    if (lo >= records.front().N_t && hi >= th.cascade_factor * lo) return "cascade-like";
    return "unclassified";
}

// ---------------------------------------------------------------------------
// Energy bounds along a frequency cascade

/// Mode list with |u_hat|^2 and |ut_hat|^2 already multiplied by the cell volume.
struct SpectralProfile {
    int d = 0;
    std::vector<double> xi;
    std::vector<double> u2;
    std::vector<double> ut2;
};

inline SpectralProfile spectral_profile(const StatePair& s) {
    const GridSpec& g = s.grid();
    auto U = spectral::forward_transform(s.u);
    auto V = spectral::forward_transform(s.ut);
    SpectralProfile p;
    p.d = g.d;
    p.xi = g.xi_norm();
    double vol = g.cell_volume();
    for (std::size_t i = 0; i < U.size(); ++i) {
        p.u2.push_back(vol * std::norm(U.coef[i]));
        p.ut2.push_back(vol * std::norm(V.coef[i]));
    }
    return p;
}

struct CascadeRecord {
    SpectralProfile profile;
    double cutoff = 0.0;  ///< c(eta) N(t)
};

struct CascadeBoundEntry {
    double cutoff = 0.0;
    double low_measured = 0.0;    ///< int_{|xi| <= K} |xi|^2 |u_hat|^2 + |ut_hat|^2
    double low_holder = 0.0;      ///< the two-term interpolation bound
    double low_eta_form = 0.0;    ///< eta_low^theta * ||(u, u_t)||_{H^{1-eps} x H^{-eps}}^{2(1-theta)}
    double eta_low = 0.0;         ///< critical mass below the cutoff
    double high_measured = 0.0;   ///< same integrand over |xi| > K
    double high_bound = 0.0;      ///< K^{-2(s_c - 1)} times the total critical mass
    double low_ratio = 0.0;
    double high_ratio = 0.0;
};

struct CascadeReport {
    double theta = 0.0;  ///< eps / (eps + s_c - 1)
    double constant = 0.0;
    std::vector<CascadeBoundEntry> entries;
    bool holds = true;
};

/// Evaluates the low-frequency interpolation bound and the high-frequency
/// Chebyshev bound on each record and checks measured/bound <= `constant`.
/// Needs s_c > 1, i.e. d >= 5. The zero mode is excluded throughout.
inline CascadeReport cascade_energy_vanishing_check(const std::vector<CascadeRecord>& records, double eps,
                                                    double constant = 1.0) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    CascadeReport rep;
    rep.constant = constant;
    for (const auto& rec : records) {
        const auto& p = rec.profile;
        double sc = critical_index(p.d);
        if (!(sc > 1.0)) throw DomainError("cascade bounds need s_c > 1 (d >= 5)");
        double theta = eps / (eps + sc - 1.0);
        rep.theta = theta;
        double K = rec.cutoff;
        double a = 0, b = 0, c = 0, e = 0, low = 0, high = 0, crit_low = 0, crit_total = 0, weak_total = 0;
        for (std::size_t i = 0; i < p.xi.size(); ++i) {
            double x = p.xi[i];
            if (x == 0.0) continue;
            double crit = std::pow(x, 2 * sc) * p.u2[i] + std::pow(x, 2 * (sc - 1)) * p.ut2[i];
            double ener = x * x * p.u2[i] + p.ut2[i];
            double weak = std::pow(x, 2 * (1 - eps)) * p.u2[i] + std::pow(x, -2 * eps) * p.ut2[i];
            crit_total += crit;
            weak_total += weak;
            if (x <= K) {
                a += std::pow(x, 2 * sc) * p.u2[i];
                b += std::pow(x, 2 * (1 - eps)) * p.u2[i];
                c += std::pow(x, 2 * (sc - 1)) * p.ut2[i];
                e += std::pow(x, -2 * eps) * p.ut2[i];
                low += ener;
                crit_low += crit;
            } else {
                high += ener;
            }
        }
        CascadeBoundEntry en;
        en.cutoff = K;
        en.low_measured = low;
        en.low_holder = std::pow(a, theta) * std::pow(b, 1 - theta) + std::pow(c, theta) * std::pow(e, 1 - theta);
        en.eta_low = crit_low;
        en.low_eta_form = std::pow(crit_low, theta) * std::pow(weak_total, 1 - theta);
        en.high_measured = high;
        en.high_bound = std::pow(K, -2 * (sc - 1)) * crit_total;
        en.low_ratio = en.low_holder > 0.0 ? low / en.low_holder : (low == 0.0 ? 0.0 : INFINITY);
        en.high_ratio = en.high_bound > 0.0 ? high / en.high_bound : (high == 0.0 ? 0.0 : INFINITY);
        bool ok = en.low_ratio <= constant * (1 + 1e-12) && en.high_ratio <= constant * (1 + 1e-12) &&
                  low <= constant * en.low_eta_form * (1 + 1e-12);
        rep.holds = rep.holds && ok;
        rep.entries.push_back(en);
    }
    return rep;
}

}  // namespace wavecrit::diagnostics
