#pragma once

#include <cmath>
#include <random>

#include "wavecrit/grid.hpp"
#include "wavecrit/spectral.hpp"

namespace testutil {

inline wavecrit::RealField random_field(const wavecrit::GridSpec& g, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    wavecrit::RealField f(g);
    for (auto& v : f.data) v = nd(rng);
    return f;
}

inline wavecrit::RealField mean_free(wavecrit::RealField f) {
    double m = 0.0;
    for (double v : f.data) m += v;
    m /= static_cast<double>(f.size());
    for (auto& v : f.data) v -= m;
    return f;
}

/// Random field whose spectrum is supported on |k_j| < kmax along every axis.
inline wavecrit::RealField band_limited(const wavecrit::GridSpec& g, int kmax, std::mt19937_64& rng) {
    auto F = wavecrit::spectral::forward_transform(random_field(g, rng));
    std::vector<int> idx(g.d);
    for (std::size_t i = 0; i < F.size(); ++i) {
        g.unflatten(i, idx.data());
        for (int a = 0; a < g.d; ++a)
            if (std::abs(g.freq_index(idx[a])) >= kmax) F.coef[i] = 0.0;
    }
    return wavecrit::spectral::inverse_transform(F);
}

inline double max_abs_diff(const wavecrit::RealField& a, const wavecrit::RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline double max_abs(const wavecrit::RealField& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

inline double gaussian(const double* x, int d, double sigma, const double* center = nullptr) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
        double y = x[a] - (center ? center[a] : 0.0);
        r2 += y * y;
    }
    return std::exp(-r2 / (2.0 * sigma * sigma));
}

}  // namespace testutil
