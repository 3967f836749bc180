#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "wavecrit/errors.hpp"

namespace wavecrit {

/// Periodic lattice [-L/2, L/2)^d with n points per axis.
///
/// Sample j along an axis sits at x = (j - n/2) L/n, so index n/2 is the origin.
/// Frequency index k runs over [-n/2, n/2) with xi = 2 pi k / L; in storage order
/// entry j holds k = j for j < n/2 and k = j - n otherwise.
struct GridSpec {
    int d = 1;
    int n = 4;
    double L = 2.0 * std::numbers::pi;

    static constexpr std::size_t max_points = std::size_t{1} << 24;

    GridSpec() = default;
    GridSpec(int dim, int points, double box) : d(dim), n(points), L(box) { validate(); }

    void validate() const {
        if (d < 1) throw DomainError("grid dimension must be >= 1");
        if (n < 4 || (n & (n - 1)) != 0) throw DomainError("points per axis must be a power of two >= 4");
        if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("box length must be positive and finite");
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) {
            total *= static_cast<std::size_t>(n);
            if (total > max_points) throw DomainError("grid exceeds the point cap of 2^24");
        }
    }

    std::size_t size() const {
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
        return total;
    }
    double dx() const { return L / n; }
    double cell_volume() const { return std::pow(dx(), d); }
    double dxi() const { return 2.0 * std::numbers::pi / L; }
    /// Largest |xi| on the lattice (the corner mode).
    double xi_max() const { return dxi() * (n / 2) * std::sqrt(static_cast<double>(d)); }

    int freq_index(int j) const { return j < n / 2 ? j : j - n; }
    double coord(int j) const { return (j - n / 2) * dx(); }

    /// Multi-index of a flat row-major offset, last axis fastest.
    void unflatten(std::size_t flat, int* idx) const {
        for (int a = d - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
            flat /= static_cast<std::size_t>(n);
        }
    }

    /// |xi|^2 for every lattice frequency in storage order.
    std::vector<double> xi_squared() const {
        std::vector<double> axis(n);
        for (int j = 0; j < n; ++j) {
            double k = freq_index(j) * dxi();
            axis[j] = k * k;
        }
        std::vector<double> out(size());
        std::vector<int> idx(d);
        for (std::size_t i = 0; i < out.size(); ++i) {
            unflatten(i, idx.data());
            double s = 0.0;
            for (int a = 0; a < d; ++a) s += axis[idx[a]];
            out[i] = s;
        }
        return out;
    }

    std::vector<double> xi_norm() const {
        auto out = xi_squared();
        for (auto& v : out) v = std::sqrt(v);
        return out;
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.d == b.d && a.n == b.n && a.L == b.L;
    }

    std::string str() const {
        return "d=" + std::to_string(d) + " n=" + std::to_string(n) + " L=" + std::to_string(L);
    }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw StructuralError("grid mismatch: " + a.str() + " vs " + b.str());
}

/// Real samples on a grid, row-major with the last axis fastest.
struct RealField {
    GridSpec grid;
    std::vector<double> data;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), data(g.size(), 0.0) {}
    RealField(const GridSpec& g, std::vector<double> samples) : grid(g), data(std::move(samples)) {
        if (data.size() != grid.size()) throw StructuralError("sample count does not match grid");
        for (double v : data)
            if (!std::isfinite(v)) throw DomainError("non-finite sample");
    }

    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    RealField& operator+=(const RealField& o) {
        require_same_grid(grid, o.grid);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        require_same_grid(grid, o.grid);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
        return *this;
    }
    RealField& operator*=(double c) {
        for (auto& v : data) v *= c;
        return *this;
    }
    friend RealField operator+(RealField a, const RealField& b) { return a += b; }
    friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
    friend RealField operator*(double c, RealField a) { return a *= c; }

    /// Fills the field from f(x) where x points to d coordinates.
    template <class F>
    static RealField sample(const GridSpec& g, F&& f) {
        RealField out(g);
        std::vector<int> idx(g.d);
        std::vector<double> x(g.d);
        for (std::size_t i = 0; i < out.size(); ++i) {
            g.unflatten(i, idx.data());
            for (int a = 0; a < g.d; ++a) x[a] = g.coord(idx[a]);
            out.data[i] = f(x.data());
        }
        return out;
    }
};

/// Fourier coefficients in FFT storage order under the unitary normalization
/// F_k = n^{-d/2} sum_j f_j exp(-2 pi i k.j / n).
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coef;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), coef(g.size()) {}
    SpectralField(const GridSpec& g, std::vector<std::complex<double>> c) : grid(g), coef(std::move(c)) {
        if (coef.size() != grid.size()) throw StructuralError("coefficient count does not match grid");
    }

    std::size_t size() const { return coef.size(); }
};

/// Phase-space point (u, u_t).
struct StatePair {
    RealField u;
    RealField ut;

    StatePair() = default;
    explicit StatePair(const GridSpec& g) : u(g), ut(g) {}
    StatePair(RealField u0, RealField u1) : u(std::move(u0)), ut(std::move(u1)) {
        require_same_grid(u.grid, ut.grid);
    }

    const GridSpec& grid() const { return u.grid; }
};

}  // namespace wavecrit
