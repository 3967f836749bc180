#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "wavecrit/grid.hpp"

namespace wavecrit::fft {

namespace detail {

// FFTW's planner is not thread-safe, execution is. Plans are created once per
// (d, n, sign) with FFTW_ESTIMATE so results do not depend on timing, and
// executed through the new-array interface on caller buffers.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int d, int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(d, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
        std::vector<int> dims(d, n);
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(d, dims.data(), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (!plan) throw ConsistencyError("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute(const GridSpec& g, std::vector<std::complex<double>>& in,
                    std::vector<std::complex<double>>& out, int sign) {
    fftw_plan plan = PlanCache::instance().get(g.d, g.n, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    for (auto& c : out) c *= scale;
}

}  // namespace detail

/// Unitary forward transform.
inline SpectralField forward(const RealField& f) {
    if (f.data.size() != f.grid.size()) throw StructuralError("field size does not match grid");
    std::vector<std::complex<double>> in(f.data.begin(), f.data.end());
    SpectralField out(f.grid);
    detail::execute(f.grid, in, out.coef, FFTW_FORWARD);
    return out;
}

/// Unitary inverse transform keeping only the real part.
inline RealField inverse(const SpectralField& F) {
    if (F.coef.size() != F.grid.size()) throw StructuralError("coefficient count does not match grid");
    std::vector<std::complex<double>> in = F.coef;
    std::vector<std::complex<double>> out(F.grid.size());
    detail::execute(F.grid, in, out, FFTW_BACKWARD);
    RealField f(F.grid);
    for (std::size_t i = 0; i < out.size(); ++i) f.data[i] = out[i].real();
    return f;
}

/// Inverse transform of a complex spectrum without discarding the imaginary part.
inline std::vector<std::complex<double>> inverse_complex(const SpectralField& F) {
    std::vector<std::complex<double>> in = F.coef;
    std::vector<std::complex<double>> out(F.grid.size());
    detail::execute(F.grid, in, out, FFTW_BACKWARD);
    return out;
}

}  // namespace wavecrit::fft
