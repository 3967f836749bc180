#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "wavecrit/errors.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/spectral.hpp"

namespace wavecrit::propagator {

/// Spectral form of a phase-space point.
struct SpectralState {
    SpectralField u;
    SpectralField ut;
};

inline SpectralState to_spectral(const StatePair& s) {
    return {spectral::forward_transform(s.u), spectral::forward_transform(s.ut)};
}

inline StatePair to_physical(const SpectralState& s) {
    return StatePair(spectral::inverse_transform(s.u), spectral::inverse_transform(s.ut));
}

/// Applies the free group per mode with omega = |xi|:
///   u  <- cos(omega t) u + sin(omega t)/omega ut
///   ut <- -omega sin(omega t) u + cos(omega t) ut
/// The zero mode takes the omega -> 0 limit, u <- u + t ut, so a nonzero mean of
/// ut makes the periodic flow grow linearly in time.
inline SpectralState evolve_linear(const SpectralState& s, double t, std::span<const double> omega) {
    SpectralState out{SpectralField(s.u.grid), SpectralField(s.u.grid)};
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        double w = omega[i];
        double c, sinc_t, ws;
        if (w == 0.0) {
            c = 1.0;
            sinc_t = t;
            ws = 0.0;
        } else {
            double sn = std::sin(w * t);
            c = std::cos(w * t);
            sinc_t = sn / w;
            ws = w * sn;
        }
        out.u.coef[i] = c * s.u.coef[i] + sinc_t * s.ut.coef[i];
        out.ut.coef[i] = -ws * s.u.coef[i] + c * s.ut.coef[i];
    }
    return out;
}

inline SpectralState evolve_linear(const SpectralState& s, double t) {
    auto omega = s.u.grid.xi_norm();
    return evolve_linear(s, t, omega);
}

inline StatePair evolve_linear(const StatePair& state, double t) {
    return to_physical(evolve_linear(to_spectral(state), t));
}

/// |xi|^2 |u_hat|^2 + |ut_hat|^2 for every mode, in storage order.
inline std::vector<double> linear_energy_per_mode(const StatePair& state) {
    auto s = to_spectral(state);
    auto xi2 = state.grid().xi_squared();
    std::vector<double> out(xi2.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = xi2[i] * std::norm(s.u.coef[i]) + std::norm(s.ut.coef[i]);
    return out;
}

/// sin(t |nabla|)/|nabla| g, with value t g_hat at the zero mode.
inline RealField sine_propagator(const RealField& g, double t) {
    return spectral::inverse_transform(spectral::apply_radial(spectral::forward_transform(g), [t](double w) {
        return w == 0.0 ? t : std::sin(w * t) / w;
    }));
}

inline RealField cosine_propagator(const RealField& g, double t) {
    return spectral::inverse_transform(
        spectral::apply_radial(spectral::forward_transform(g), [t](double w) { return std::cos(w * t); }));
}

struct DecayOptions {
    double support_threshold = 1e-6;  ///< |g| below this fraction of max|g| counts as outside the support
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double horizon = 0.0;
    std::vector<double> times;
    std::vector<double> norms;
};

/// Radius about the origin (periodic distance) containing all samples above
/// `threshold * max|g|`.
inline double support_radius(const RealField& g, double threshold) {
    const GridSpec& grid = g.grid;
    double peak = 0.0;
    for (double v : g.data) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    double r2max = 0.0;
    std::vector<int> idx(grid.d);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.data[i]) <= threshold * peak) continue;
        grid.unflatten(i, idx.data());
        double r2 = 0.0;
        for (int a = 0; a < grid.d; ++a) r2 += grid.coord(idx[a]) * grid.coord(idx[a]);
        r2max = std::max(r2max, r2);
    }
    return std::sqrt(r2max);
}

/// Least-squares slope and intercept of y against x.
inline std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw StructuralError("fit needs at least two points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("degenerate fit abscissae");
    double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

/// Fits log ||sin(t|nabla|)/|nabla| g||_{L^p} against log t.
///
/// The mean of g is removed first: on the torus the zero mode drifts like t * mean
/// and would swamp the decay. All times must stay below the wrap-around horizon
/// L/2 - diam(supp g).
inline DecayFit dispersive_decay_fit(const RealField& g, double p, std::span<const double> times,
                                     const DecayOptions& opts = {}) {
    if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be >= 1");
    if (times.size() < 2) throw StructuralError("need at least two times");
    DecayFit fit;
    fit.horizon = g.grid.L / 2.0 - 2.0 * support_radius(g, opts.support_threshold);
    for (double t : times) {
        if (!(t > 0.0)) throw DomainError("fit times must be positive");
        if (t >= fit.horizon) throw HorizonError("time " + std::to_string(t) + " beyond wrap-around horizon " +
                                                 std::to_string(fit.horizon));
    }
    auto G = spectral::forward_transform(g);
    G.coef[0] = 0.0;
    auto omega = g.grid.xi_norm();
    std::vector<double> lx, ly;
    for (double t : times) {
        SpectralField S(g.grid);
        for (std::size_t i = 0; i < S.size(); ++i)
            S.coef[i] = omega[i] == 0.0 ? 0.0 : G.coef[i] * (std::sin(omega[i] * t) / omega[i]);
        double norm = spectral::lebesgue_norm(spectral::inverse_transform(S), p);
        fit.times.push_back(t);
        fit.norms.push_back(norm);
        lx.push_back(std::log(t));
        ly.push_back(std::log(norm));
    }
    std::tie(fit.slope, fit.intercept) = linear_fit(lx, ly);
    return fit;
}

/// |LHS - RHS| / (||g|| ||h||) for
///   <|nabla| sin(t1|nabla|)/|nabla| g, -|nabla| sin(t2|nabla|)/|nabla| h> + <cos(t1|nabla|) g, -cos(t2|nabla|) h>
///     = <g, -cos((t1 - t2)|nabla|) h>.
/// The left side is assembled in physical space, the right side from coefficients.
inline double double_duhamel_identity_check(const RealField& g, const RealField& h, double t1, double t2) {
    require_same_grid(g.grid, h.grid);
    auto sin_part = [](const RealField& f, double t) {
        return spectral::inverse_transform(
            spectral::apply_radial(spectral::forward_transform(f), [t](double w) { return std::sin(w * t); }));
    };
    double lhs = -spectral::inner_product(sin_part(g, t1), sin_part(h, t2)) -
                 spectral::inner_product(cosine_propagator(g, t1), cosine_propagator(h, t2));
    auto G = spectral::forward_transform(g);
    auto H = spectral::apply_radial(spectral::forward_transform(h), [dt = t1 - t2](double w) { return -std::cos(w * dt); });
    double rhs = spectral::inner_product(G, H);
    double scale = spectral::lebesgue_norm(g, 2.0) * spectral::lebesgue_norm(h, 2.0);
    return scale == 0.0 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / scale;
}

}  // namespace wavecrit::propagator
