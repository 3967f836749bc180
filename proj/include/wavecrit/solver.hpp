#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wavecrit/dealias.hpp"
#include "wavecrit/diagnostics.hpp"
#include "wavecrit/errors.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/propagator.hpp"
#include "wavecrit/spectral.hpp"
#include "wavecrit/trajectory.hpp"

// Time stepping for u_tt - Lap u + sign u^3 = 0 on the periodic lattice.
//
// Each slab [t, t + dt] is solved by Picard iteration on the Duhamel map
//   u(t + tau) = W(tau)(u, u_t) - int_0^tau sin((tau - s)|nabla|)/|nabla| sign u(s)^3 ds
// with u^3 replaced by its Lagrange interpolant through the Gauss-Legendre nodes
// of the slab. The kernel is integrated exactly per frequency, so the linear part
// carries no time-step restriction; dt is bounded only by the contraction of the
// Picard map, which depends on the data.

namespace wavecrit::solver {

struct SolverConfig {
    double dt = 0.01;
    int quad_nodes = 3;
    double picard_tol = 1e-12;  ///< relative to max(1, max|u|) over the slab nodes
    int picard_max = 50;
    double T = 1.0;
    bool dealias = false;
    int sign = 1;               ///< +1 defocusing, -1 focusing, 0 linear
    int snapshot_every = 1;     ///< store every k-th slab end in Trajectory::states
    double overflow_limit = 1e150;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
        if (quad_nodes < 2) throw DomainError("quad_nodes must be >= 2");
        if (!(picard_tol >= 1e-14) || !std::isfinite(picard_tol)) throw DomainError("picard_tol must be >= 1e-14");
        if (picard_max < 1) throw DomainError("picard_max must be >= 1");
        if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("horizon must be nonnegative");
        if (sign < -1 || sign > 1) throw DomainError("sign must be -1, 0 or +1");
        if (snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
    }

    long steps() const { return static_cast<long>(std::ceil(T / dt - 1e-9)); }
};

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[m - 1 - i] = z;
        w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

/// int_0^tau f(s) ds by composite 16-point Gauss with `panels` equal panels.
template <class F>
double integrate(double tau, int panels, F&& f) {
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_legendre(16, r.first, r.second);
        return r;
    }();
    double h = tau / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = p * h;
        for (std::size_t q = 0; q < rule.first.size(); ++q)
            sum += rule.second[q] * f(a + 0.5 * h * (rule.first[q] + 1.0));
    }
    return 0.5 * h * sum;
}

}  // namespace detail

struct SlabResult {
    propagator::SpectralState end;
    std::vector<SpectralField> nodes;   ///< u_hat at the collocation nodes
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
    double linear_proxy = 0.0;          ///< ||W(t)(u, u_t)||_{L^{d+1}_{t,x}} over the slab

    /// Mean ratio of successive Picard residuals (geometric decay rate).
    double contraction_ratio() const {
        std::vector<double> r;
        for (std::size_t i = 1; i < residual_history.size(); ++i)
            if (residual_history[i - 1] > 0.0 && residual_history[i] > 0.0)
                r.push_back(residual_history[i] / residual_history[i - 1]);
        if (r.empty()) return 0.0;
        double s = 0.0;
        for (double v : r) s += std::log(v);
        return std::exp(s / r.size());
    }
};

/// Precomputed exponential collocation weights for one grid, slab width and node count.
///
/// For each distinct |k|^2 the slab stores
///   A_ij = int_0^{tau_i} sin(w (tau_i - s))/w l_j(s) ds   (i over the nodes and tau = dt)
///   B_j  = int_0^{dt}    cos(w (dt - s)) l_j(s) ds
/// with l_j the Lagrange basis on the Gauss nodes.
class SlabScheme {
public:
    SlabScheme(const GridSpec& g, double dt, int nodes, bool dealias, int sign)
        : grid_(g), dt_(dt), m_(nodes), dealias_(dealias), sign_(sign) {
        if (nodes < 1) throw DomainError("need at least one collocation node");
        if (!(dt > 0.0)) throw DomainError("dt must be positive");
        std::vector<double> x, w;
        detail::gauss_legendre(m_, x, w);
        for (int i = 0; i < m_; ++i) {
            tau_.push_back(0.5 * dt * (x[i] + 1.0));
            gauss_w_.push_back(0.5 * dt * w[i]);
        }
        build_groups();
        build_weights();
        if (dealias_) padder_.emplace(g);
    }

    const GridSpec& grid() const { return grid_; }
    double dt() const { return dt_; }
    int nodes() const { return m_; }
    const std::vector<double>& node_times() const { return tau_; }

    /// sign * u^3 in coefficient form, dealiased when configured.
    SpectralField nonlinearity(const SpectralField& V) const {
        if (padder_) {
            SpectralField F = padder_->cube(V);
            for (auto& c : F.coef) c *= static_cast<double>(sign_);
            return F;
        }
        RealField u = spectral::inverse_transform(V);
        for (double& v : u.data) v = sign_ * v * v * v;
        return spectral::forward_transform(u);
    }

    /// Free evolution W(tau_i)(u, u_t) at the nodes.
    std::vector<SpectralField> free_nodes(const propagator::SpectralState& s0) const {
        std::vector<SpectralField> out(m_, SpectralField(grid_));
        for (std::size_t k = 0; k < s0.u.size(); ++k) {
            const double* c = &free_[group_[k] * 3 * (m_ + 1)];
            for (int i = 0; i < m_; ++i) out[i].coef[k] = c[3 * i] * s0.u.coef[k] + c[3 * i + 1] * s0.ut.coef[k];
        }
        return out;
    }

    /// Phi(v) at the nodes for given node values of u_hat.
    std::vector<SpectralField> duhamel_map(const std::vector<SpectralField>& V, const propagator::SpectralState& s0) const {
        if (static_cast<int>(V.size()) != m_) throw StructuralError("slab node count mismatch");
        std::vector<SpectralField> F;
        F.reserve(m_);
        for (const auto& v : V) F.push_back(nonlinearity(v));
        auto out = free_nodes(s0);
        apply_A(F, out);
        return out;
    }

    /// Physical-space form of duhamel_map.
    std::vector<RealField> duhamel_map(const std::vector<RealField>& v, const StatePair& s0) const {
        std::vector<SpectralField> V;
        for (const auto& f : v) V.push_back(spectral::forward_transform(f));
        auto out = duhamel_map(V, propagator::to_spectral(s0));
        std::vector<RealField> r;
        for (const auto& f : out) r.push_back(spectral::inverse_transform(f));
        return r;
    }

    /// Solution at the slab end from converged node values.
    propagator::SpectralState finish(const std::vector<SpectralField>& V, const propagator::SpectralState& s0) const {
        std::vector<SpectralField> F;
        F.reserve(m_);
        for (const auto& v : V) F.push_back(nonlinearity(v));
        propagator::SpectralState out{SpectralField(grid_), SpectralField(grid_)};
        const std::size_t stride = static_cast<std::size_t>(m_ + 1) * m_ + m_;
        for (std::size_t k = 0; k < s0.u.size(); ++k) {
            std::size_t g = group_[k];
            const double* c = &free_[g * 3 * (m_ + 1) + 3 * m_];
            const double* a = &weights_[g * stride + static_cast<std::size_t>(m_) * m_];
            const double* b = a + m_;
            std::complex<double> u = c[0] * s0.u.coef[k] + c[1] * s0.ut.coef[k];
            std::complex<double> ut = -c[2] * s0.u.coef[k] + c[0] * s0.ut.coef[k];
            for (int j = 0; j < m_; ++j) {
                u -= a[j] * F[j].coef[k];
                ut -= b[j] * F[j].coef[k];
            }
            out.u.coef[k] = u;
            out.ut.coef[k] = ut;
        }
        return out;
    }

    /// Picard iteration from the free evolution until the relative sup-norm change
    /// between sweeps is at most `tol`. Throws ContractionFailure otherwise.
    SlabResult solve(const propagator::SpectralState& s0, double tol, int max_iter) const {
        SlabResult r;
        auto free = free_nodes(s0);
        auto V = free;
        std::vector<RealField> U;
        double lin = 0.0;
        for (int i = 0; i < m_; ++i) {
            U.push_back(spectral::inverse_transform(V[i]));
            double p = grid_.d + 1.0;
            lin += gauss_w_[i] * std::pow(spectral::lebesgue_norm(U.back(), p), p);
        }
        r.linear_proxy = std::pow(lin, 1.0 / (grid_.d + 1.0));
        for (int it = 1; it <= max_iter; ++it) {
            std::vector<SpectralField> F;
            F.reserve(m_);
            for (const auto& v : V) F.push_back(nonlinearity(v));
            auto Vn = free;
            apply_A(F, Vn);
            double diff = 0.0, scale = 1.0;
            bool finite = true;
            for (int i = 0; i < m_; ++i) {
                RealField Un = spectral::inverse_transform(Vn[i]);
                for (std::size_t k = 0; k < Un.size(); ++k) {
                    finite = finite && std::isfinite(Un.data[k]);
                    diff = std::max(diff, std::abs(Un.data[k] - U[i].data[k]));
                    scale = std::max(scale, std::abs(Un.data[k]));
                }
                U[i] = std::move(Un);
            }
            V = std::move(Vn);
            double res = diff / scale;
            if (!finite || !std::isfinite(res))
                throw ContractionFailure("Picard iteration produced non-finite values", it,
                                         std::numeric_limits<double>::infinity());
            r.residual_history.push_back(res);
            r.iterations = it;
            r.residual = res;
            if (res <= tol) {
                r.end = finish(V, s0);
                r.nodes = std::move(V);
                return r;
            }
        }
        throw ContractionFailure("Picard iteration did not reach tolerance in " + std::to_string(max_iter) +
                                     " sweeps (residual " + std::to_string(r.residual) + ")",
                                 r.iterations, r.residual);
    }

private:
    void build_groups() {
        std::vector<int> idx(grid_.d);
        std::map<long long, std::size_t> ids;
        group_.resize(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            grid_.unflatten(i, idx.data());
            long long k2 = 0;
            for (int a = 0; a < grid_.d; ++a) {
                long long k = grid_.freq_index(idx[a]);
                k2 += k * k;
            }
            auto [it, inserted] = ids.emplace(k2, omega_.size());
            if (inserted) omega_.push_back(grid_.dxi() * std::sqrt(static_cast<double>(k2)));
            group_[i] = it->second;
        }
    }

    double lagrange(int j, double s) const {
        double v = 1.0;
        for (int q = 0; q < m_; ++q)
            if (q != j) v *= (s - tau_[q]) / (tau_[j] - tau_[q]);
        return v;
    }

    void build_weights() {
        const std::size_t stride = static_cast<std::size_t>(m_ + 1) * m_ + m_;
        weights_.assign(omega_.size() * stride, 0.0);
        free_.assign(omega_.size() * 3 * (m_ + 1), 0.0);
        std::vector<double> targets = tau_;
        targets.push_back(dt_);
        for (std::size_t g = 0; g < omega_.size(); ++g) {
            double w = omega_[g];
            auto sinc = [w](double t) { return w == 0.0 ? t : std::sin(w * t) / w; };
            for (int i = 0; i <= m_; ++i) {
                double t = targets[i];
                double* c = &free_[g * 3 * (m_ + 1) + 3 * i];
                c[0] = std::cos(w * t);
                c[1] = sinc(t);
                c[2] = w * std::sin(w * t);
                int panels = 1 + static_cast<int>(w * t / 3.0);
                for (int j = 0; j < m_; ++j)
                    weights_[g * stride + static_cast<std::size_t>(i) * m_ + j] =
                        detail::integrate(t, panels, [&](double s) { return sinc(t - s) * lagrange(j, s); });
            }
            int panels = 1 + static_cast<int>(w * dt_ / 3.0);
            for (int j = 0; j < m_; ++j)
                weights_[g * stride + static_cast<std::size_t>(m_ + 1) * m_ + j] = detail::integrate(
                    dt_, panels, [&](double s) { return std::cos(w * (dt_ - s)) * lagrange(j, s); });
        }
    }

    void apply_A(const std::vector<SpectralField>& F, std::vector<SpectralField>& out) const {
        const std::size_t stride = static_cast<std::size_t>(m_ + 1) * m_ + m_;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double* a = &weights_[group_[k] * stride];
            for (int i = 0; i < m_; ++i) {
                std::complex<double> acc = 0.0;
                for (int j = 0; j < m_; ++j) acc += a[i * m_ + j] * F[j].coef[k];
                out[i].coef[k] -= acc;
            }
        }
    }

    GridSpec grid_;
    double dt_;
    int m_;
    bool dealias_;
    int sign_;
    std::vector<double> tau_, gauss_w_;
    std::vector<double> omega_;
    std::vector<std::size_t> group_;
    std::vector<double> weights_;
    std::vector<double> free_;
    std::optional<dealias::Padder> padder_;
};

/// One slab of the Picard scheme from physical data.
inline SlabResult picard_solve_slab(const StatePair& s0, const SolverConfig& cfg) {
    cfg.validate();
    SlabScheme scheme(s0.grid(), cfg.dt, cfg.quad_nodes, cfg.dealias, cfg.sign);
    return scheme.solve(propagator::to_spectral(s0), cfg.picard_tol, cfg.picard_max);
}

using Observer = std::function<void(double t, const StatePair& state)>;

namespace detail {

/// Builds per-slab records and stored snapshots; shared by both integrators.
class Recorder {
public:
    Recorder(Trajectory& traj, const SolverConfig& cfg, const GridSpec& g, Observer obs)
        : traj_(traj), cfg_(cfg), obs_(std::move(obs)) {
        sc_ = diagnostics::critical_index(g.d);
        if (g.d == 2 || g.d == 3) {
            std::vector<double> c(g.d, 0.0);
            weight_ = diagnostics::morawetz_weight(g, c);
        }
    }

    void add(long step, double t, const StatePair& s, int iters, double residual) {
        SlabRecord r;
        r.t = t;
        r.energy = diagnostics::energy(s, cfg_.dealias, cfg_.sign);
        r.hs_crit = spectral::sobolev_norm(s.u, sc_, sc_ >= 0.0 ? spectral::ZeroMode::Strict : spectral::ZeroMode::Exclude);
        r.hs_crit_minus1_ut = spectral::sobolev_norm(s.ut, sc_ - 1.0, spectral::ZeroMode::Exclude);
        double p = s.grid().d + 1.0;
        double ld = std::pow(spectral::lebesgue_norm(s.u, p), p);
        double mor = weight_.data.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : diagnostics::morawetz_density_integral(s.u, weight_);
        if (step > 0) {
            double h = t - last_t_;
            ld_acc_ += 0.5 * h * (ld + last_ld_);
            mor_acc_ += 0.5 * h * (mor + last_mor_);
        }
        last_t_ = t;
        last_ld_ = ld;
        last_mor_ = mor;
        r.l_dplus1_accum = std::pow(ld_acc_, 1.0 / p);
        r.morawetz_accum = mor_acc_;
        r.picard_iters = iters;
        r.residual = residual;
        traj_.records.push_back(r);
        if (step % cfg_.snapshot_every == 0) {
            traj_.push(t, s);
            pending_.reset();
        } else {
            pending_.emplace(t, s);
        }
        if (obs_) obs_(t, s);
    }

    /// Stores the last accepted state if the snapshot cadence skipped it.
    void finish() {
        if (pending_) traj_.push(pending_->first, std::move(pending_->second));
        pending_.reset();
    }

private:
    Trajectory& traj_;
    const SolverConfig& cfg_;
    Observer obs_;
    double sc_ = 0.0;
    RealField weight_;
    double last_t_ = 0.0, last_ld_ = 0.0, last_mor_ = 0.0;
    double ld_acc_ = 0.0, mor_acc_ = 0.0;
    std::optional<std::pair<double, StatePair>> pending_;
};

inline bool overflowed(const StatePair& s, double limit) {
    for (std::size_t i = 0; i < s.u.size(); ++i)
        if (!std::isfinite(s.u.data[i]) || !std::isfinite(s.ut.data[i]) || std::abs(s.u.data[i]) > limit ||
            std::abs(s.ut.data[i]) > limit)
            return true;
    return false;
}

inline StatePair physical_unchecked(const propagator::SpectralState& s) {
    StatePair out(s.u.grid);
    out.u.data = fft::inverse(s.u).data;
    out.ut.data = fft::inverse(s.ut).data;
    return out;
}

}  // namespace detail

/// Slab-by-slab Picard evolution over [0, cfg.T]. Contraction failure or a sample
/// above cfg.overflow_limit ends the run early with `truncated` set.
inline Trajectory evolve(const StatePair& state0, const SolverConfig& cfg, Observer observer = {}) {
    cfg.validate();
    const GridSpec& g = state0.grid();
    SlabScheme scheme(g, cfg.dt, cfg.quad_nodes, cfg.dealias, cfg.sign);
    Trajectory traj;
    detail::Recorder rec(traj, cfg, g, std::move(observer));
    rec.add(0, 0.0, state0, 0, 0.0);
    auto s = propagator::to_spectral(state0);
    const long steps = cfg.steps();
    for (long k = 1; k <= steps; ++k) {
        SlabResult r;
        try {
            r = scheme.solve(s, cfg.picard_tol, cfg.picard_max);
        } catch (const ContractionFailure& e) {
            traj.truncated = true;
            traj.truncation_reason = "contraction failure at t=" + std::to_string((k - 1) * cfg.dt) + ": " + e.what();
            break;
        }
        s = std::move(r.end);
        StatePair phys = detail::physical_unchecked(s);
        if (detail::overflowed(phys, cfg.overflow_limit)) {
            traj.truncated = true;
            traj.truncation_reason = "norm overflow at t=" + std::to_string(k * cfg.dt);
            break;
        }
        rec.add(k, k * cfg.dt, phys, r.iterations, r.residual);
    }
    rec.finish();
    return traj;
}

/// Independent method-of-lines integrator: classical RK4 on the coefficients with
/// the same spatial discretization. Requires dt * max|xi| <= 2.8.
inline Trajectory reference_evolve(const StatePair& state0, const SolverConfig& cfg, Observer observer = {}) {
    cfg.validate();
    const GridSpec& g = state0.grid();
    auto xi2 = g.xi_squared();
    double wmax = std::sqrt(*std::max_element(xi2.begin(), xi2.end()));
    if (cfg.dt * wmax > 2.8)
        throw StabilityError("RK4 step " + std::to_string(cfg.dt) + " exceeds the limit 2.8/" + std::to_string(wmax));
    SlabScheme nl(g, cfg.dt, 1, cfg.dealias, cfg.sign);
    using propagator::SpectralState;
    auto rhs = [&](const SpectralState& y) {
        SpectralState d{y.ut, nl.nonlinearity(y.u)};
        for (std::size_t i = 0; i < d.ut.size(); ++i) d.ut.coef[i] = -xi2[i] * y.u.coef[i] - d.ut.coef[i];
        return d;
    };
    auto axpy = [](const SpectralState& y, double a, const SpectralState& k) {
        SpectralState out = y;
        for (std::size_t i = 0; i < out.u.size(); ++i) {
            out.u.coef[i] += a * k.u.coef[i];
            out.ut.coef[i] += a * k.ut.coef[i];
        }
        return out;
    };
    Trajectory traj;
    detail::Recorder rec(traj, cfg, g, std::move(observer));
    rec.add(0, 0.0, state0, 0, 0.0);
    auto y = propagator::to_spectral(state0);
    const double h = cfg.dt;
    const long steps = cfg.steps();
    for (long k = 1; k <= steps; ++k) {
        auto k1 = rhs(y);
        auto k2 = rhs(axpy(y, 0.5 * h, k1));
        auto k3 = rhs(axpy(y, 0.5 * h, k2));
        auto k4 = rhs(axpy(y, h, k3));
        for (std::size_t i = 0; i < y.u.size(); ++i) {
            y.u.coef[i] += h / 6.0 * (k1.u.coef[i] + 2.0 * k2.u.coef[i] + 2.0 * k3.u.coef[i] + k4.u.coef[i]);
            y.ut.coef[i] += h / 6.0 * (k1.ut.coef[i] + 2.0 * k2.ut.coef[i] + 2.0 * k3.ut.coef[i] + k4.ut.coef[i]);
        }
        StatePair phys = detail::physical_unchecked(y);
        if (detail::overflowed(phys, cfg.overflow_limit)) {
            traj.truncated = true;
            traj.truncation_reason = "norm overflow at t=" + std::to_string(k * h);
            break;
        }
        rec.add(k, k * h, phys, 0, 0.0);
    }
    rec.finish();
    return traj;
}

// ---------------------------------------------------------------------------
// Stability under perturbation

/// Rescales a perturbation to unit norm in H^{s_c} x H^{s_c - 1} (zero modes excluded).
inline StatePair normalize_perturbation(const StatePair& p) {
    double nrm = diagnostics::critical_norm(p);
    if (!(nrm > 0.0)) throw DomainError("perturbation has zero critical norm");
    return StatePair((1.0 / nrm) * p.u, (1.0 / nrm) * p.ut);
}

struct StabilityReport {
    std::vector<double> eps;
    std::vector<double> distance;     ///< D(eps) = ||u_eps - u||_{L^{d+1}_{t,x}([0, T])}
    std::vector<double> response;     ///< D(eps) / eps, zero for eps = 0
    double response_spread = 0.0;     ///< max/min of the nonzero responses
    bool truncated = false;
};

/// Evolves data0 and data0 + eps * perturbation for each level and reports the
/// L^{d+1}_{t,x} distance over [0, cfg.T] (trapezoid over slab ends).
inline StabilityReport stability_experiment(const StatePair& data0, const StatePair& perturbation,
                                            const std::vector<double>& levels, const SolverConfig& cfg) {
    require_same_grid(data0.grid(), perturbation.grid());
    if (std::abs(diagnostics::critical_norm(perturbation) - 1.0) > 1e-9)
        throw DomainError("perturbation must have unit critical norm");
    const double p = data0.grid().d + 1.0;
    std::vector<RealField> base;
    auto bt = evolve(data0, cfg, [&](double, const StatePair& s) { base.push_back(s.u); });
    StabilityReport rep;
    rep.truncated = bt.truncated;
    double lo = INFINITY, hi = 0.0;
    for (double eps : levels) {
        StatePair d(data0.u + eps * perturbation.u, data0.ut + eps * perturbation.ut);
        std::vector<double> vals;
        std::size_t k = 0;
        auto pt = evolve(d, cfg, [&](double, const StatePair& s) {
            if (k < base.size()) vals.push_back(std::pow(spectral::lebesgue_norm(s.u - base[k], p), p));
            ++k;
        });
        rep.truncated = rep.truncated || pt.truncated;
        double acc = 0.0;
        for (std::size_t i = 1; i < vals.size(); ++i) acc += 0.5 * cfg.dt * (vals[i] + vals[i - 1]);
        double D = std::pow(acc, 1.0 / p);
        rep.eps.push_back(eps);
        rep.distance.push_back(D);
        double resp = eps == 0.0 ? 0.0 : D / eps;
        rep.response.push_back(resp);
        if (eps != 0.0) {
            lo = std::min(lo, resp);
            hi = std::max(hi, resp);
        }
    }
    rep.response_spread = hi > 0.0 ? hi / lo : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Scattering

struct ScatteringReport {
    std::vector<double> times;
    std::vector<StatePair> candidates;  ///< S(-T)(u(T), u_t(T))
    std::vector<double> differences;    ///< H^{s_c} x H^{s_c - 1} distance between consecutive candidates
    bool monotone = true;
};

/// Pulls stored states back by the free group and measures consecutive
/// differences in the critical norm with zero modes excluded.
inline ScatteringReport scattering_extract(const Trajectory& traj, const std::vector<double>& times) {
    if (traj.truncated) throw UnavailableError("trajectory is truncated: " + traj.truncation_reason);
    ScatteringReport rep;
    for (double T : times) {
        auto it = std::find_if(traj.times.begin(), traj.times.end(),
                               [T](double t) { return std::abs(t - T) <= 1e-9 * std::max(1.0, std::abs(T)); });
        if (it == traj.times.end()) throw UnavailableError("no stored state at t=" + std::to_string(T));
        const StatePair& s = traj.states[static_cast<std::size_t>(it - traj.times.begin())];
        rep.times.push_back(T);
        rep.candidates.push_back(propagator::evolve_linear(s, -T));
    }
    for (std::size_t i = 1; i < rep.candidates.size(); ++i) {
        StatePair diff(rep.candidates[i].u - rep.candidates[i - 1].u, rep.candidates[i].ut - rep.candidates[i - 1].ut);
        rep.differences.push_back(diagnostics::critical_norm(diff));
        if (i >= 2 && rep.differences[i - 1] > rep.differences[i - 2]) rep.monotone = false;
    }
    return rep;
}

}  // namespace wavecrit::solver
