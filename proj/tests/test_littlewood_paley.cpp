#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_helpers.hpp"
#include "wavecrit/littlewood_paley.hpp"

using namespace wavecrit;
using namespace wavecrit::lp;
using testutil::max_abs_diff;
using testutil::random_field;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Random field with spectrum on |k| < K (radial, lattice units).
RealField radial_band_limited(const GridSpec& g, double K, std::mt19937_64& rng) {
    auto F = spectral::forward_transform(random_field(g, rng));
    auto norms = g.xi_norm();
    for (std::size_t i = 0; i < F.size(); ++i)
        if (norms[i] / g.dxi() >= K) F.coef[i] = 0.0;
    return spectral::inverse_transform(F);
}

}  // namespace

TEST(Bump, ClosedFormValues) {
    EXPECT_EQ(bump(0.0), 1.0);
    EXPECT_EQ(bump(1.0), 1.0);
    EXPECT_EQ(bump(2.0), 0.0);
    EXPECT_EQ(bump(3.0), 0.0);
    EXPECT_NEAR(bump(1.5), 0.5, 1e-15);
    // Independent evaluation of the documented formula at an interior point.
    double x = 0.3, a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    EXPECT_NEAR(bump(1.3), b / (a + b), 1e-15);
    double prev = 1.0;
    for (double r = 1.0; r <= 2.0; r += 1e-3) {
        EXPECT_LE(bump(r), prev + 1e-15);
        EXPECT_GE(bump(r), 0.0);
        prev = bump(r);
    }
}

TEST(Projections, DyadicValidation) {
    GridSpec g(1, 16, two_pi);
    RealField f(g);
    EXPECT_THROW(project_leq(f, 3.0), DomainError);
    EXPECT_THROW(project_range(f, 4.0, 2.0), DomainError);
    EXPECT_NO_THROW(project_leq(f, 0.25));
}

TEST(Projections, IdentityOnBandLimitedData) {
    std::mt19937_64 rng(1);
    GridSpec g(2, 64, two_pi);
    for (double K : {2.0, 4.0, 8.0}) {
        RealField f = radial_band_limited(g, K, rng);
        for (double Np : {2 * K, 4 * K}) EXPECT_LT(max_abs_diff(project_leq(f, Np), f), 1e-12);
    }
}

TEST(Projections, LeqPlusGtIsIdentity) {
    std::mt19937_64 rng(2);
    GridSpec g(2, 32, 5.0);
    RealField f = random_field(g, rng);
    for (double N : {0.5, 1.0, 4.0, 16.0}) EXPECT_LT(max_abs_diff(project_leq(f, N) + project_gt(f, N), f), 1e-12);
}

TEST(Projections, Telescoping) {
    std::mt19937_64 rng(3);
    GridSpec g(2, 64, two_pi);
    for (int t = 0; t < 10; ++t) {
        RealField f = random_field(g, rng);
        for (auto [M, N] : {std::pair{1.0, 16.0}, std::pair{0.5, 4.0}, std::pair{2.0, 32.0}}) {
            RealField sum(g);
            for (double N1 = 2 * M; N1 <= N; N1 *= 2) sum += project_band(f, N1);
            EXPECT_LT(max_abs_diff(project_range(f, M, N), sum), 1e-12);
        }
    }
}

TEST(Projections, PartitionReconstructsField) {
    std::mt19937_64 rng(4);
    for (GridSpec g : {GridSpec(2, 64, two_pi), GridSpec(2, 32, 13.0), GridSpec(3, 16, 1.0), GridSpec(6, 8, 4.0)}) {
        RealField f = random_field(g, rng);
        EXPECT_LT(max_abs_diff(reconstruct_from_shells(f), f), 1e-12) << g.str();
        // Only the zero mode survives the floor projection.
        auto low = spectral::forward_transform(project_leq(f, floor_dyadic(g)));
        for (std::size_t i = 1; i < low.size(); ++i) EXPECT_EQ(low.coef[i], std::complex<double>(0.0));
    }
}

TEST(Projections, ShellsAreExactlyTheNonzeroOnes) {
    GridSpec g(2, 64, two_pi);
    auto shells = dyadic_shells(g);
    auto norms = g.xi_norm();
    for (double N : shells) {
        bool any = false;
        for (double xi : norms) any = any || symbol_band(xi, N) != 0.0;
        EXPECT_TRUE(any) << N;
    }
    for (double N : {shells.front() / 2, shells.back() * 2}) {
        bool any = false;
        for (double xi : norms) any = any || symbol_band(xi, N) != 0.0;
        EXPECT_FALSE(any) << N;
    }
}

TEST(Projections, BandWeightAtThreeHalves) {
    GridSpec g(1, 64, two_pi);
    double N = 4.0;
    auto f = RealField::sample(g, [](const double* x) { return std::cos(6.0 * x[0]); });  // |xi| = 3N/2
    double weight = bump(1.5) - bump(3.0);
    EXPECT_LT(max_abs_diff(project_band(f, N), weight * f), 1e-13);
}

TEST(Projections, CommuteWithEachOtherAndDerivatives) {
    std::mt19937_64 rng(5);
    GridSpec g(2, 32, 7.0);
    RealField f = testutil::mean_free(random_field(g, rng));
    auto a = project_band(project_leq(f, 2.0), 1.0);
    auto b = project_leq(project_band(f, 1.0), 2.0);
    EXPECT_LT(max_abs_diff(a, b), 1e-12);
    auto c = spectral::fractional_derivative(project_band(f, 4.0), 1.5);
    auto e = project_band(spectral::fractional_derivative(f, 1.5), 4.0);
    EXPECT_LT(max_abs_diff(c, e), 1e-10);
}

TEST(Projections, UniformlyBoundedOnLp) {
    std::mt19937_64 rng(6);
    GridSpec g(2, 64, two_pi);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        RealField f = random_field(g, rng);
        for (double p : {1.0, 2.0, 4.0, spectral::infinity}) {
            double fp = spectral::lebesgue_norm(f, p);
            for (double N : dyadic_shells(g)) {
                worst = std::max(worst, spectral::lebesgue_norm(project_band(f, N), p) / fp);
                worst = std::max(worst, spectral::lebesgue_norm(project_leq(f, N), p) / fp);
            }
        }
    }
    std::printf("max projection ratio = %.4f\n", worst);
    EXPECT_LT(worst, 3.0);
}

TEST(Bernstein, SingleModeDerivativeRatio) {
    GridSpec g(2, 64, two_pi);
    double N = 8.0;
    auto f = RealField::sample(g, [](const double* x) { return std::cos(10.0 * x[0]); });
    for (double s : {0.5, 1.0, 2.0}) {
        auto r = bernstein_ratio(f, N, 2.0, 4.0, s);
        ASSERT_TRUE(r.has_value());
        EXPECT_NEAR(r->deriv_plus, std::pow(10.0 / N, s), 1e-12);
        EXPECT_NEAR(r->deriv_minus, std::pow(10.0 / N, -s), 1e-12);
        EXPECT_GE(r->deriv_plus, std::pow(2.0, -s));
        EXPECT_LE(r->deriv_plus, std::pow(2.0, s));
    }
}

TEST(Bernstein, ZeroFieldIsUndefined) {
    GridSpec g(2, 16, two_pi);
    EXPECT_FALSE(bernstein_ratio(RealField(g), 2.0, 2.0, 4.0, 1.0).has_value());
    auto low = RealField::sample(g, [](const double* x) { return std::cos(x[0]); });
    EXPECT_FALSE(bernstein_ratio(low, 8.0, 2.0, 4.0, 1.0).has_value());
}

TEST(Bernstein, RatiosUniformlyBounded) {
    std::mt19937_64 rng(7);
    GridSpec g(2, 64, two_pi);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        RealField f = radial_band_limited(g, 31.0, rng);
        for (double N : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            auto r = bernstein_ratio(f, N, 2.0, 4.0, 1.0);
            ASSERT_TRUE(r.has_value());
            for (double v : {r->lq_over_lp, r->deriv_plus, r->deriv_minus, r->leq_lq_over_lp, r->leq_deriv_plus})
                worst = std::max(worst, v);
        }
    }
    std::printf("max Bernstein ratio = %.4f\n", worst);
    EXPECT_LT(worst, 4.0);
}
