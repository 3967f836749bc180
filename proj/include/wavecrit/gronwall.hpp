#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wavecrit/errors.hpp"
#include "wavecrit/exponents.hpp"

// Discrete Gronwall inequality on dyadic sequences and the frequency-decay
// recursion that feeds it.
//
//   x_k <= C 2^{-g k} + eta sum_{l<k} 2^{-g (k-l)} x_l + eta sum_{l>=k} 2^{-g' (l-k)} x_l
//
// Sequences are stored for k = 0..K. Terms with l > K are closed with the bound
// x_l <= sup_j x_j, which sums to sup 2^{-g'(K+1-k)} / (1 - 2^{-g'}).

namespace wavecrit::gronwall {

class GronwallParams {
public:
    GronwallParams(double gamma, double gamma2, double C, double eta, double rho)
        : gamma_(gamma), gamma2_(gamma2), C_(C), eta_(eta), rho_(rho) {
        for (double v : {gamma, gamma2, C, eta, rho})
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError("gronwall parameters must be positive and finite");
        if (!(rho < gamma)) throw DomainError("gronwall parameters need rho < gamma");
    }

    double gamma() const { return gamma_; }
    double gamma2() const { return gamma2_; }
    double C() const { return C_; }
    double eta() const { return eta_; }
    double rho() const { return rho_; }

private:
    double gamma_, gamma2_, C_, eta_, rho_;
};

/// Nonnegative finite values x_0..x_K.
class DyadicSequence {
public:
    DyadicSequence() = default;
    explicit DyadicSequence(std::vector<double> x) : x_(std::move(x)) {
        for (double v : x_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DomainError("dyadic sequence entries must be finite and nonnegative");
    }

    int K() const { return static_cast<int>(x_.size()) - 1; }
    std::size_t size() const { return x_.size(); }
    double operator[](std::size_t k) const { return x_[k]; }
    const std::vector<double>& values() const { return x_; }
    double sup() const { return x_.empty() ? 0.0 : *std::max_element(x_.begin(), x_.end()); }

private:
    std::vector<double> x_;
};

/// (1/4) min{1 - 2^{-g}, 1 - 2^{-g'}, 1 - 2^{rho-g}}.
inline double hypothesis_threshold(double gamma, double gamma2, double rho) {
    double m = std::min({1.0 - std::exp2(-gamma), 1.0 - std::exp2(-gamma2), 1.0 - std::exp2(rho - gamma)});
    return 0.25 * m;
}

inline bool gronwall_hypothesis(const GronwallParams& p) {
    return p.eta() <= hypothesis_threshold(p.gamma(), p.gamma2(), p.rho());
}

namespace detail {

inline double tail_remainder(double gamma2, double sup, int K, int k) {
    return sup * std::exp2(-gamma2 * (K + 1 - k)) / (1.0 - std::exp2(-gamma2));
}

// Right-hand side for the Gronwall form with generic (C, eta, g, g'). Both memory
// sums are geometric, so they are accumulated by one sweep in each direction.
inline std::vector<double> lemma_rhs(const std::vector<double>& x, double C, double eta, double g, double g2) {
    const int K = static_cast<int>(x.size()) - 1;
    std::vector<double> r(x.size());
    if (K < 0) return r;
    const double sup = *std::max_element(x.begin(), x.end());
    const double a = std::exp2(-g), b = std::exp2(-g2);
    std::vector<double> fwd(x.size());
    fwd[K] = x[K] + tail_remainder(g2, sup, K, K);
    for (int k = K - 1; k >= 0; --k) fwd[k] = x[k] + b * fwd[k + 1];
    double back = 0.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) back = a * (back + x[k - 1]);
        r[k] = C * std::exp2(-g * k) + eta * (back + fwd[k]);
    }
    return r;
}

}  // namespace detail

/// Right-hand side of the recursion evaluated on x, tail closed at K.
inline std::vector<double> recursion_rhs(const DyadicSequence& x, const GronwallParams& p) {
    return detail::lemma_rhs(x.values(), p.C(), p.eta(), p.gamma(), p.gamma2());
}

/// True iff x_k <= rhs_k + slack * max(1, sup x) for every k <= K.
inline bool gronwall_recursion_holds(const DyadicSequence& x, const GronwallParams& p, double slack = 1e-12) {
    auto r = recursion_rhs(x, p);
    const double tol = slack * std::max(1.0, x.sup());
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] > r[k] + tol) return false;
    return true;
}

/// (4C + sup x) 2^{-rho k}.
inline std::vector<double> lemma_envelope(const DyadicSequence& x, const GronwallParams& p) {
    std::vector<double> b(x.size());
    const double a = 4.0 * p.C() + x.sup();
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = a * std::exp2(-p.rho() * static_cast<double>(k));
    return b;
}

inline bool lemma_conclusion_holds(const DyadicSequence& x, const GronwallParams& p) {
    auto b = lemma_envelope(x, p);
    for (std::size_t k = 0; k < b.size(); ++k)
        if (x[k] > b[k] * (1.0 + 1e-12)) return false;
    return true;
}

namespace detail {

// Decreasing iteration y <- rhs(y) from a supersolution constant. The map is
// order preserving, so the limit is the largest solution of the truncated recursion.
template <class Rhs>
std::vector<double> iterate_down(Rhs rhs, int K, double C, double q, int max_iter) {
    if (K < 0) throw DomainError("truncation length K must be >= 0");
    double M = q < 1.0 ? 2.0 * C / (1.0 - q) : 1e6 * std::max(1.0, C);
    const double blowup = 1e12 * M;
    std::vector<double> y(static_cast<std::size_t>(K) + 1, M);
    for (int it = 0; it < max_iter; ++it) {
        auto next = rhs(y);
        bool settled = true;
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (!std::isfinite(next[k]) || next[k] > blowup)
                throw NoFixedPointError("recursion iterates diverge; no bounded fixed point");
            if (std::abs(next[k] - y[k]) > 1e-15 * next[k] + 1e-300) settled = false;
        }
        y = std::move(next);
        if (settled) return y;
    }
    throw NoFixedPointError("recursion iteration did not settle in " + std::to_string(max_iter) + " steps");
}

}  // namespace detail

/// Bounded solution of the untruncated recursion, returned on k = 0..K. The recursion
/// is a contraction under the hypothesis, so this is also its maximal solution. It is
/// solved on a longer horizon whose sup-closed edge perturbs k <= K by far less than
/// 2^{-rho k}; closing the tail at K itself would pin y_K near eta * sup.
inline DyadicSequence maximal_sequence(const GronwallParams& p, int K, int max_iter = 20000) {
    if (K < 0) throw DomainError("truncation length K must be >= 0");
    const double q = p.eta() * (std::exp2(-p.gamma()) / (1.0 - std::exp2(-p.gamma())) +
                                1.0 / (1.0 - std::exp2(-p.gamma2())));
    const double pad = std::ceil((p.rho() * K + 64.0) / p.gamma2()) + 8.0;
    if (pad > 1e6) throw DomainError("gamma' too small for the requested K");
    const int horizon = K + static_cast<int>(pad);
    auto rhs = [&](const std::vector<double>& y) {
        return detail::lemma_rhs(y, p.C(), p.eta(), p.gamma(), p.gamma2());
    };
    auto y = detail::iterate_down(rhs, horizon, p.C(), q, max_iter);
    y.resize(static_cast<std::size_t>(K) + 1);
    return DyadicSequence(std::move(y));
}

// ---------------------------------------------------------------------------
// Frequency-decay recursion for S(2^{-k} N_0).

struct DecayExponents {
    double gamma = 0.0;   // d - d/R - 3
    double gamma2 = 0.0;  // d/R - d/2 + 2
};

inline DecayExponents decay_exponents(int d, double R) {
    return {d - d / R - 3.0, d / R - d / 2.0 + 2.0};
}

/// Largest eta' = C' eta allowed: min of the squared Gronwall threshold and 2^{-4(g+g')}.
inline double decay_eta_prime_limit(int d, double R, double rho) {
    auto e = decay_exponents(d, R);
    double h = hypothesis_threshold(e.gamma, e.gamma2, rho);
    return std::min(h * h, std::exp2(-4.0 * (e.gamma + e.gamma2)));
}

/// Right-hand side of the unreduced recursion with coefficient eta':
///   C' 2^{-g k} + eta' sum_{i<=k+2} 2^{(i-k) g} x_i + eta' sum_{i>=k+3} 2^{(k-i) g'} x_i,
/// indices past K replaced by sup x.
inline std::vector<double> decay_raw_rhs(const std::vector<double>& x, double Cp, double eta_p, double g, double g2) {
    const int K = static_cast<int>(x.size()) - 1;
    const double sup = x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
    auto at = [&](int i) { return i <= K ? x[i] : sup; };
    std::vector<double> r(x.size());
    for (int k = 0; k <= K; ++k) {
        double near = 0.0;
        for (int i = 0; i <= k + 2; ++i) near += std::exp2((i - k) * g) * at(i);
        double far = 0.0;
        for (int i = k + 3; i <= K; ++i) far += std::exp2((k - i) * g2) * x[i];
        if (K + 1 >= k + 3) far += detail::tail_remainder(g2, sup, K, k);
        else far += sup * std::exp2(-3.0 * g2) / (1.0 - std::exp2(-g2));
        r[k] = Cp * std::exp2(-g * k) + eta_p * (near + far);
    }
    return r;
}

struct DecayRecursionResult {
    int d = 0;
    double R = 0.0;
    double gamma = 0.0, gamma2 = 0.0, rho = 0.0;
    double eta = 0.0, eta_prime = 0.0, sqrt_eta_prime = 0.0, C_prime = 1.0;
    DyadicSequence sequence;    // maximal solution of the reduced recursion
    std::vector<double> bound;  // (4C' + sup) 2^{-rho k}
    bool majorant_holds = false;  // unreduced RHS <= reduced RHS on the sequence
    bool bound_holds = false;
    double envelope_exponent = 0.0;  // largest beta with x_k <= (4C' + sup) 2^{-beta k}
    double exponent = 0.0;           // min(rho, envelope_exponent)
    double tail_slope = 0.0;         // least-squares decay rate of log2 x_k over the middle half
};

/// Builds the recursion for S(2^{-k} N_0) at (d, R), reduces it to the Gronwall form
/// with coefficient sqrt(eta'), and solves for the maximal sequence.
inline DecayRecursionResult decay_recursion_fixpoint(int d, double R, double eta, int K, double C_prime = 1.0,
                                                     double rho = std::numeric_limits<double>::quiet_NaN()) {
    auto [lo, hi] = exponents::decay_R_window(d);
    if (!(R > lo.to_double() && R < hi.to_double()))
        throw DomainError("R = " + std::to_string(R) + " outside the decay window for d = " + std::to_string(d));
    if (!(eta > 0.0) || !(C_prime > 0.0)) throw DomainError("eta and C' must be positive");
    if (K < 4) throw DomainError("decay recursion needs K >= 4");
    if (std::isnan(rho)) rho = (d - 4) / 2.0;
    auto e = decay_exponents(d, R);
    if (!(rho > 0.0)) throw DomainError("decay exponent rho must be positive");
    if (e.gamma * K > 1000.0)
        throw DomainError("2^{-gamma K} leaves the double range; use K <= " + std::to_string(static_cast<int>(1000.0 / e.gamma)));
    if (rho >= e.gamma)
        throw InapplicableError("rho = " + std::to_string(rho) + " is not below gamma = " + std::to_string(e.gamma));

    DecayRecursionResult res;
    res.d = d;
    res.R = R;
    res.gamma = e.gamma;
    res.gamma2 = e.gamma2;
    res.rho = rho;
    res.eta = eta;
    res.C_prime = C_prime;
    res.eta_prime = C_prime * eta;
    if (res.eta_prime > decay_eta_prime_limit(d, R, rho))
        throw InapplicableError("eta' = " + std::to_string(res.eta_prime) + " above the smallness threshold");
    res.sqrt_eta_prime = std::sqrt(res.eta_prime);

    GronwallParams p(e.gamma, e.gamma2, C_prime, res.sqrt_eta_prime, rho);
    if (!gronwall_hypothesis(p)) throw ConsistencyError("reduced coefficient fails the Gronwall hypothesis");
    res.sequence = maximal_sequence(p, K);

    const auto& y = res.sequence.values();
    auto raw = decay_raw_rhs(y, C_prime, res.eta_prime, e.gamma, e.gamma2);
    auto red = recursion_rhs(res.sequence, p);
    res.majorant_holds = true;
    for (std::size_t k = 0; k < y.size(); ++k)
        if (raw[k] > red[k] * (1.0 + 1e-12)) res.majorant_holds = false;

    res.bound = lemma_envelope(res.sequence, p);
    res.bound_holds = lemma_conclusion_holds(res.sequence, p);

    const double a = 4.0 * C_prime + res.sequence.sup();
    double beta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < y.size(); ++k) {
        if (y[k] <= 0.0) continue;
        beta = std::min(beta, std::log2(a / y[k]) / static_cast<double>(k));
    }
    res.envelope_exponent = beta;
    res.exponent = std::min(rho, beta);

    // Least squares on the middle half, away from the start-up layer and the truncation edge.
    const int k0 = K / 4, k1 = (3 * K) / 4;
    double sk = 0, sl = 0, skk = 0, skl = 0;
    int n = 0;
    for (int k = k0; k <= k1; ++k) {
        if (y[k] <= 0.0) continue;
        double l = std::log2(y[k]);
        sk += k;
        sl += l;
        skk += static_cast<double>(k) * k;
        skl += k * l;
        ++n;
    }
    if (n >= 2) res.tail_slope = -(n * skl - sk * sl) / (n * skk - sk * sk);
    return res;
}

}  // namespace wavecrit::gronwall
