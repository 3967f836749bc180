#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "wavecrit/errors.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/spectral.hpp"

// Dyadic frequencies N are in the same physical units as xi = 2 pi k / L, so on a
// box of side 2 pi they coincide with integer lattice radii.

namespace wavecrit::lp {

/// Smooth radial bump: phi(r) = 1 for r <= 1, 0 for r >= 2, and on (1, 2)
/// phi(r) = 1 - S(r - 1) with S(x) = psi(x) / (psi(x) + psi(1 - x)), psi(x) = exp(-1/x).
/// phi(3/2) = 1/2 exactly.
inline double bump(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double x = r - 1.0;
    double a = std::exp(-1.0 / x);
    double b = std::exp(-1.0 / (1.0 - x));
    return 1.0 - a / (a + b);
}

inline void require_dyadic(double N) {
    if (!(N > 0.0) || !std::isfinite(N)) throw DomainError("dyadic frequency must be positive");
    int e = 0;
    double m = std::frexp(N, &e);
    if (m != 0.5) throw DomainError("frequency is not a power of two");
}

inline double symbol_leq(double xi, double N) { return bump(xi / N); }
inline double symbol_gt(double xi, double N) { return 1.0 - bump(xi / N); }
inline double symbol_band(double xi, double N) { return bump(xi / N) - bump(2.0 * xi / N); }

inline SpectralField project_leq(const SpectralField& F, double N) {
    require_dyadic(N);
    return spectral::apply_radial(F, [N](double xi) { return symbol_leq(xi, N); });
}
inline SpectralField project_gt(const SpectralField& F, double N) {
    require_dyadic(N);
    return spectral::apply_radial(F, [N](double xi) { return symbol_gt(xi, N); });
}
inline SpectralField project_band(const SpectralField& F, double N) {
    require_dyadic(N);
    return spectral::apply_radial(F, [N](double xi) { return symbol_band(xi, N); });
}
/// P_{M < . <= N} = P_{<= N} - P_{<= M}.
inline SpectralField project_range(const SpectralField& F, double M, double N) {
    require_dyadic(M);
    require_dyadic(N);
    if (M > N) throw DomainError("range projection needs M <= N");
    return spectral::apply_radial(F, [M, N](double xi) { return symbol_leq(xi, N) - symbol_leq(xi, M); });
}

inline RealField project_leq(const RealField& f, double N) {
    return spectral::inverse_transform(project_leq(spectral::forward_transform(f), N));
}
inline RealField project_gt(const RealField& f, double N) {
    return spectral::inverse_transform(project_gt(spectral::forward_transform(f), N));
}
inline RealField project_band(const RealField& f, double N) {
    return spectral::inverse_transform(project_band(spectral::forward_transform(f), N));
}
inline RealField project_range(const RealField& f, double M, double N) {
    return spectral::inverse_transform(project_range(spectral::forward_transform(f), M, N));
}

/// Largest dyadic N whose P_{<=N} keeps only the zero mode (2N <= lattice spacing).
inline double floor_dyadic(const GridSpec& g) {
    return std::exp2(std::floor(std::log2(g.dxi() / 2.0)));
}

/// Dyadic shells N whose symbol P_N is nonzero somewhere on the lattice, in increasing order.
/// Together with P_{<= floor_dyadic(g)} they sum to the identity.
inline std::vector<double> dyadic_shells(const GridSpec& g) {
    std::vector<double> out;
    double xi_min = g.dxi();
    double xi_max = g.xi_max();
    for (double N = 2.0 * floor_dyadic(g); N / 2.0 < xi_max; N *= 2.0)
        if (2.0 * N > xi_min) out.push_back(N);
    return out;
}

/// P_{<= N_lo} f + sum over shells of P_N f.
inline RealField reconstruct_from_shells(const RealField& f) {
    auto F = spectral::forward_transform(f);
    auto sum = spectral::inverse_transform(project_leq(F, floor_dyadic(f.grid)));
    for (double N : dyadic_shells(f.grid)) sum += spectral::inverse_transform(project_band(F, N));
    return sum;
}

/// Measured Bernstein ratios; each is O(1) uniformly in N when the inequalities hold.
struct BernsteinRatios {
    double lq_over_lp = 0.0;         ///< ||P_N f||_q / (N^{d/p - d/q} ||P_N f||_p)
    double deriv_plus = 0.0;         ///< || |nabla|^s P_N f||_p / (N^s ||P_N f||_p)
    double deriv_minus = 0.0;        ///< || |nabla|^{-s} P_N f||_p / (N^{-s} ||P_N f||_p)
    double leq_lq_over_lp = 0.0;     ///< same as lq_over_lp for P_{<= N}
    double leq_deriv_plus = 0.0;     ///< || |nabla|^s P_{<= N} f||_p / (N^s ||P_{<= N} f||_p)
};

/// Returns std::nullopt when P_N f vanishes, since the ratios are then undefined.
inline std::optional<BernsteinRatios> bernstein_ratio(const RealField& f, double N, double p, double q, double s) {
    require_dyadic(N);
    if (!(p >= 1.0) || !(q >= p)) throw DomainError("Bernstein ratios need 1 <= p <= q");
    if (!(s >= 0.0)) throw DomainError("derivative order must be >= 0");
    const int d = f.grid.d;
    auto F = spectral::forward_transform(f);
    auto band = project_band(F, N);
    double total = spectral::coefficient_l2(F);
    double band_mass = spectral::coefficient_l2(band);
    if (band_mass == 0.0 || band_mass <= 1e-14 * total) return std::nullopt;

    auto lp_norm = [](const SpectralField& G, double r) {
        return spectral::lebesgue_norm(spectral::inverse_transform(G), r);
    };
    double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    double gain = std::pow(N, d * (inv_p - inv_q));

    BernsteinRatios out;
    double band_p = lp_norm(band, p);
    out.lq_over_lp = lp_norm(band, q) / (gain * band_p);
    out.deriv_plus = lp_norm(spectral::fractional_derivative(band, s), p) / (std::pow(N, s) * band_p);
    out.deriv_minus = lp_norm(spectral::fractional_derivative(band, -s), p) / (std::pow(N, -s) * band_p);

    auto low = project_leq(F, N);
    double low_p = lp_norm(low, p);
    if (low_p > 0.0) {
        out.leq_lq_over_lp = lp_norm(low, q) / (gain * low_p);
        out.leq_deriv_plus = lp_norm(spectral::fractional_derivative(low, s), p) / (std::pow(N, s) * low_p);
    }
    return out;
}

}  // namespace wavecrit::lp
