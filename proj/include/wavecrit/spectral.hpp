#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wavecrit/errors.hpp"
#include "wavecrit/fft.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/trajectory.hpp"

// Norm conventions on the lattice [-L/2, L/2)^d with unitary coefficients F_k:
//   ||f||_{L^2}^2    = (L/n)^d sum_j |f_j|^2 = (L/n)^d sum_k |F_k|^2
//   ||f||_{H^s}^2    = (L/n)^d sum_k |xi_k|^{2s} |F_k|^2
// Both converge to the continuum norms as n grows with L fixed.

namespace wavecrit::spectral {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

inline SpectralField forward_transform(const RealField& f) { return fft::forward(f); }
inline RealField inverse_transform(const SpectralField& F) { return fft::inverse(F); }

/// Symbol evaluated on the d components of xi.
using Symbol = std::function<double(std::span<const double>)>;

/// Coefficientwise multiplication by m(xi). A non-finite symbol value is only
/// tolerated where the coefficient vanishes.
inline SpectralField apply_multiplier(const SpectralField& F, const Symbol& m) {
    const GridSpec& g = F.grid;
    SpectralField out(g);
    std::vector<int> idx(g.d);
    std::vector<double> xi(g.d);
    for (std::size_t i = 0; i < F.size(); ++i) {
        g.unflatten(i, idx.data());
        for (int a = 0; a < g.d; ++a) xi[a] = g.freq_index(idx[a]) * g.dxi();
        double v = m(std::span<const double>(xi));
        if (!std::isfinite(v)) {
            if (F.coef[i] != std::complex<double>(0.0)) throw SingularityError("symbol undefined at a lattice point with mass");
            v = 0.0;
        }
        out.coef[i] = F.coef[i] * v;
    }
    return out;
}

/// Multiplier depending on |xi| only; faster than the general form.
inline SpectralField apply_radial(const SpectralField& F, const std::function<double(double)>& m) {
    SpectralField out(F.grid);
    auto norms = F.grid.xi_norm();
    for (std::size_t i = 0; i < F.size(); ++i) {
        double v = m(norms[i]);
        if (!std::isfinite(v)) {
            if (F.coef[i] != std::complex<double>(0.0)) throw SingularityError("symbol undefined at a lattice point with mass");
            v = 0.0;
        }
        out.coef[i] = F.coef[i] * v;
    }
    return out;
}

inline double coefficient_l2(const SpectralField& F) {
    double s = 0.0;
    for (const auto& c : F.coef) s += std::norm(c);
    return std::sqrt(s);
}

/// |xi|^s with the zero-frequency convention: 0 for s > 0, 1 for s = 0.
inline double power_symbol(double xi, double s) {
    if (xi == 0.0) return s == 0.0 ? 1.0 : (s > 0.0 ? 0.0 : infinity);
    return std::pow(xi, s);
}

/// Throws MeanNonzeroError when the zero mode is not negligible for s < 0.
inline void require_mean_free(const SpectralField& F, double s) {
    if (s >= 0.0) return;
    double total = coefficient_l2(F);
    if (std::abs(F.coef[0]) > 1e-12 * total)
        throw MeanNonzeroError("negative-order derivative of a field with nonzero mean");
}

inline SpectralField fractional_derivative(const SpectralField& F, double s) {
    require_mean_free(F, s);
    SpectralField G = F;
    if (s < 0.0) G.coef[0] = 0.0;
    return apply_radial(G, [s](double xi) { return power_symbol(xi, s); });
}

/// |nabla|^s f.
inline RealField fractional_derivative(const RealField& f, double s) {
    return inverse_transform(fractional_derivative(forward_transform(f), s));
}

enum class ZeroMode {
    Strict,   ///< s < 0 with nonzero mean is an error
    Exclude,  ///< drop the zero mode before measuring
};

inline double sobolev_norm(const SpectralField& F, double s, ZeroMode zero = ZeroMode::Strict) {
    if (zero == ZeroMode::Strict) require_mean_free(F, s);
    auto norms = F.grid.xi_norm();
    double sum = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (norms[i] == 0.0 && (s < 0.0 || zero == ZeroMode::Exclude)) continue;
        double w = power_symbol(norms[i], s);
        sum += w * w * std::norm(F.coef[i]);
    }
    return std::sqrt(sum * F.grid.cell_volume());
}

/// ||f||_{H^s} = || |nabla|^s f ||_{L^2}.
inline double sobolev_norm(const RealField& f, double s, ZeroMode zero = ZeroMode::Strict) {
    return sobolev_norm(forward_transform(f), s, zero);
}

/// Riemann-sum L^p norm; p = infinity gives the max norm.
inline double lebesgue_norm(const RealField& f, double p) {
    if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.data) m = std::max(m, std::abs(v));
        return m;
    }
    double sum = 0.0;
    if (p == 2.0) {
        for (double v : f.data) sum += v * v;
        return std::sqrt(sum * f.grid.cell_volume());
    }
    for (double v : f.data) sum += std::pow(std::abs(v), p);
    return std::pow(sum * f.grid.cell_volume(), 1.0 / p);
}

/// ||f||_{L^2} computed on the coefficient side.
inline double parseval_l2(const SpectralField& F) {
    return coefficient_l2(F) * std::sqrt(F.grid.cell_volume());
}

/// Real L^2 inner product <f, g> from coefficients.
inline double inner_product(const SpectralField& F, const SpectralField& G) {
    require_same_grid(F.grid, G.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) s += (F.coef[i] * std::conj(G.coef[i])).real();
    return s * F.grid.cell_volume();
}

inline double inner_product(const RealField& f, const RealField& g) {
    require_same_grid(f.grid, g.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.data[i] * g.data[i];
    return s * f.grid.cell_volume();
}

/// Time-integration weights for samples at uniform spacing (trapezoid rule).
inline std::vector<double> trapezoid_weights(std::span<const double> times) {
    std::vector<double> w(times.size(), 0.0);
    for (std::size_t i = 1; i < times.size(); ++i) {
        double h = times[i] - times[i - 1];
        w[i - 1] += 0.5 * h;
        w[i] += 0.5 * h;
    }
    return w;
}

/// Uniform spacing, except that the last interval may be shorter (a run whose
/// length is not a multiple of the snapshot stride still stores its end state).
inline void require_uniform(std::span<const double> times) {
    if (times.size() < 3) return;
    double h = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        double hi = times[i] - times[i - 1];
        double tol = 1e-9 * std::max(1.0, std::abs(h));
        bool ok = i + 1 == times.size() ? hi > 0.0 && hi <= h + tol : hi > 0.0 && std::abs(hi - h) <= tol;
        if (!ok)
            throw StructuralError("trajectory times are not uniformly spaced");
    }
}

/// ||u||_{L^q_t L^r_x} over the stored snapshots of u.
inline double spacetime_norm(const Trajectory& traj, double q, double r) {
    if (traj.states.empty()) throw StructuralError("empty trajectory");
    if (!(q >= 1.0)) throw DomainError("time exponent must be >= 1");
    require_uniform(traj.times);
    std::vector<double> norms;
    norms.reserve(traj.states.size());
    for (const auto& s : traj.states) norms.push_back(lebesgue_norm(s.u, r));
    if (std::isinf(q)) return *std::max_element(norms.begin(), norms.end());
    auto w = trapezoid_weights(traj.times);
    double sum = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) sum += w[i] * std::pow(norms[i], q);
    return std::pow(sum, 1.0 / q);
}

/// lambda u(lambda x) realized on the same grid: mode k moves to lambda k and the
/// amplitude is multiplied by lambda. The result tiles the box with lambda^d copies
/// of the rescaled profile, each a faithful copy of lambda u(lambda x) on a box of
/// side L/lambda; per-copy norms equal the whole-box norm times lambda^{-d/2}.
inline RealField scaling_transform(const RealField& f, int lambda) {
    if (lambda < 2) throw DomainError("scaling factor must be an integer >= 2");
    const GridSpec& g = f.grid;
    SpectralField F = forward_transform(f);
    double total = coefficient_l2(F);
    SpectralField G(g);
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < F.size(); ++i) {
        g.unflatten(i, idx.data());
        bool inside = true;
        std::size_t target = 0;
        long long parity = 0;
        for (int a = 0; a < g.d; ++a) {
            int k = g.freq_index(idx[a]);
            if (2 * std::abs(k) * lambda >= g.n) inside = false;
            parity += static_cast<long long>(k) * (lambda - 1);
            int kk = k * lambda;
            target = target * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(kk < 0 ? kk + g.n : kk);
        }
        if (!inside) {
            if (std::abs(F.coef[i]) > 1e-12 * std::max(total, 1e-300))
                throw AliasingError("field is not band-limited below n/(2 lambda)");
            continue;
        }
        // Samples start at x = -L/2, so mode k carries a phase (-1)^k that has to
        // become (-1)^{lambda k} for the result to be centred at the origin.
        double sign = (parity % 2 == 0) ? 1.0 : -1.0;
        G.coef[target] = F.coef[i] * (sign * lambda);
    }
    return inverse_transform(G);
}

/// Same samples multiplied by lambda on the box of side L/lambda: the literal
/// lambda u(lambda x) restricted to the shrunken box.
inline RealField rescale_box(const RealField& f, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("scaling factor must be positive");
    GridSpec g(f.grid.d, f.grid.n, f.grid.L / lambda);
    RealField out(g);
    for (std::size_t i = 0; i < f.size(); ++i) out.data[i] = lambda * f.data[i];
    return out;
}

/// Cyclic lattice shift by `shift[a]` cells along each axis.
inline RealField translate(const RealField& f, std::span<const int> shift) {
    const GridSpec& g = f.grid;
    if (static_cast<int>(shift.size()) != g.d) throw StructuralError("shift has wrong dimension");
    RealField out(g);
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.unflatten(i, idx.data());
        std::size_t target = 0;
        for (int a = 0; a < g.d; ++a) {
            int j = ((idx[a] + shift[a]) % g.n + g.n) % g.n;
            target = target * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(j);
        }
        out.data[target] = f.data[i];
    }
    return out;
}

}  // namespace wavecrit::spectral
