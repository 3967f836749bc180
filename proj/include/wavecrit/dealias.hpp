#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "wavecrit/grid.hpp"
#include "wavecrit/spectral.hpp"

// Galerkin dealiasing by zero-padding. Products are formed on the 2n-point grid,
// where a cubic of modes with |k_j| < n/2 has no aliasing, and then projected back.
// Nyquist modes (k_j = -n/2) are outside the Galerkin space.

namespace wavecrit::dealias {

class Padder {
public:
    explicit Padder(const GridSpec& g) : grid_(g), fine_(g.d, 2 * g.n, g.L) {
        map_.resize(g.size());
        std::vector<int> idx(g.d);
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.unflatten(i, idx.data());
            std::size_t t = 0;
            bool nyquist = false;
            for (int a = 0; a < g.d; ++a) {
                int k = g.freq_index(idx[a]);
                if (2 * k == -g.n) nyquist = true;
                t = t * static_cast<std::size_t>(fine_.n) + static_cast<std::size_t>(k < 0 ? k + fine_.n : k);
            }
            map_[i] = nyquist ? npos : t;
        }
        // Unitary transforms: the same function has coefficients scaled by (M/n)^{d/2}.
        scale_ = std::pow(2.0, g.d / 2.0);
    }

    const GridSpec& grid() const { return grid_; }

    /// Samples of P u on the padded grid.
    RealField upsample(const SpectralField& F) const {
        SpectralField G(fine_);
        for (std::size_t i = 0; i < F.size(); ++i)
            if (map_[i] != npos) G.coef[map_[i]] = F.coef[i] * scale_;
        return spectral::inverse_transform(G);
    }

    /// Coefficients of P f for samples f on the padded grid.
    SpectralField project(const RealField& f) const {
        auto G = spectral::forward_transform(f);
        SpectralField F(grid_);
        for (std::size_t i = 0; i < F.size(); ++i)
            if (map_[i] != npos) F.coef[i] = G.coef[map_[i]] / scale_;
        return F;
    }

    /// P((P u)^3), exact.
    SpectralField cube(const SpectralField& F) const {
        auto u = upsample(F);
        for (double& v : u.data) v = v * v * v;
        return project(u);
    }

    /// int (P u)^4 dx, exact.
    double quartic_integral(const SpectralField& F) const {
        auto u = upsample(F);
        double s = 0.0;
        for (double v : u.data) s += v * v * v * v;
        return s * fine_.cell_volume();
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    GridSpec grid_, fine_;
    std::vector<std::size_t> map_;
    double scale_ = 1.0;
};

}  // namespace wavecrit::dealias
