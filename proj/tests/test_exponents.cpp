#include <gmpxx.h>
#include <gtest/gtest.h>

#include <map>

#include "wavecrit/exponents.hpp"

using namespace wavecrit;
using namespace wavecrit::exponents;

namespace {

mpq_class Q(long a, long b = 1) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

bool admissible(int d, const mpq_class& inv_q, const mpq_class& r, const mpq_class& s) {
    mpq_class dd(d);
    bool scaling = inv_q + dd / r == dd / 2 - s;
    bool gap = inv_q + (dd - 1) / (2 * r) <= (dd - 1) / 4;
    return scaling && gap;
}

// Hand-transcribed oracle for every claim, written directly in GMP arithmetic
// without the polynomial encoding used by the database.
std::map<std::string, bool> oracle(int d) {
    mpq_class D(d);
    mpq_class sc = (D - 2) / 2;
    mpq_class al = (D * D - 4 * D + 1) / (2 * (D - 1));
    mpq_class lo = (D - 3) / (2 * (D - 1));
    mpq_class hi = (D + 1) / (2 * (D - 1));
    mpq_class pl = (D + 5) / (2 * (D + 1));
    mpq_class ps = (D * D + 2 * D - 7) / (2 * (D * D - 1));
    mpq_class re = (D * D * D - D * D - 5 * D + 1) / (2 * D * (D * D - 1));
    mpq_class rlo = 2 * (D - 1) / (D - 3);
    mpq_class rhi = std::min(mpq_class(2 * D / (D - 4)), mpq_class(3 * D / (D - 1)));
    mpq_class qm = (D * D - D - 2) / (2 * (D - 3));
    mpq_class g = D - D / rlo - 3;

    std::map<std::string, bool> m;
    m["A1"] = admissible(d, 1 / (D + 1), D + 1, sc);
    m["A2"] = admissible(d, (D - 3) / (2 * (D + 1)), 2 * (D * D - 1) / (D * D - 2 * D + 5), lo);
    m["A3"] = admissible(d, Q(1, 2), rlo, hi);
    m["A4"] = admissible(d, 1 / (D + 1), 2 * D * (D * D - 1) / (D * D * D - D * D - 5 * D + 1), hi);
    m["A5"] = admissible(d, 0, 2, 0);
    m["I1"] = sc - al == hi;
    m["I2"] = 1 + al - sc == lo;
    m["I3"] = 1 - (D - 3) / (2 * (D + 1)) == pl;
    m["I4"] = 1 - (D * D - 2 * D + 5) / (2 * (D * D - 1)) == ps;
    m["H1"] = pl == Q(1, 2) + 2 / (D + 1);
    m["H2"] = ps == lo + 2 / (D + 1);
    m["H3"] = ps == 1 / (2 * D) + (D * D * D + D * D - 7 * D + 1) / (2 * D * (D * D - 1));
    m["H4"] = pl == 1 / (D + 1) + (D + 3) / (2 * (D + 1));
    m["H5"] = ps == 1 / (D + 1) + (D * D - 5) / (2 * (D * D - 1));
    m["H6"] = (D + 3) / (2 * (D + 1)) == Q(1, 2) + 1 / (D + 1);
    m["H7"] = (D * D - 5) / (2 * (D * D - 1)) == lo + 1 / (D + 1);
    m["H8"] = 2 / (D + 1) == 2 * (1 / (D + 1));
    m["H9"] = (D * D * D + D * D - 7 * D + 1) / (2 * D * (D * D - 1)) == re + 1 / (D + 1);
    m["S1"] = 1 / (2 * D) == lo - al / D;
    m["S2"] = 1 / (D + 1) == re - al / D;
    m["W1"] = rlo < rhi;
    m["W2"] = (D - 1) * (Q(1, 2) - 1 / rlo) == 1;
    m["W3"] = (D - 4) / 2 < g && g == (D - 2) * (D - 3) / (2 * (D - 1));
    m["W4"] = D / 2 - D / rlo - 1 > 0;
    m["W5"] = 3 * D / (D - 1) < D;
    m["Q1"] = rlo < qm;
    m["Q2"] = qm < D;
    m["Q3"] = 4 < qm;
    m["Q4"] = qm < D - 1;
    m["D1"] = rlo < D - 1;
    return m;
}

}  // namespace

TEST(Exponents, CriticalRegularity) {
    EXPECT_EQ(critical_regularity(6), Rational(2));
    EXPECT_EQ(critical_regularity(4), Rational(1));
    EXPECT_EQ(critical_regularity(3), Rational(1, 2));
    EXPECT_THROW(critical_regularity(2), DomainError);
}

TEST(Exponents, AlphaExponent) {
    EXPECT_EQ(alpha_exponent(6), Rational(13, 10));
    EXPECT_EQ(alpha_exponent(7), Rational(11, 6));
    EXPECT_EQ(alpha_exponent(8), Rational(33, 14));
    EXPECT_THROW(alpha_exponent(5), DomainError);
}

TEST(Exponents, WaveAdmissibleExamples) {
    for (int d = 2; d <= 20; ++d) EXPECT_TRUE(is_wave_admissible(AdmissiblePair(Exponent::infinity(), 2, 0, d)));
    EXPECT_TRUE(is_wave_admissible(AdmissiblePair(7, 7, 2, 6)));
    EXPECT_TRUE(is_wave_admissible(AdmissiblePair(2, Rational(10, 3), Rational(7, 10), 6)));
    EXPECT_FALSE(is_wave_admissible(AdmissiblePair(2, Rational(10, 3), Rational(7, 10) + Rational(1, 100), 6)));
    EXPECT_THROW(AdmissiblePair(1, 2, 0, 3), DomainError);
    EXPECT_THROW(AdmissiblePair(2, Rational(3, 2), 0, 3), DomainError);
}

TEST(Exponents, AdmissibilityPicksUniqueIndex) {
    // For fixed (q, r, d) the scaling line fixes s; nearby indices are rejected.
    for (int d = 3; d <= 12; ++d) {
        Rational q(d + 1), r(d + 1);
        Rational s = Rational(d, 2) - q.reciprocal() - Rational(d) / r;
        AdmissiblePair pair(q, r, s, d);
        bool gap_ok = pair.gap_slack().sign() >= 0;
        EXPECT_EQ(is_wave_admissible(pair), gap_ok);
        for (Rational eps : {Rational(1, 1000), Rational(-1, 7), Rational(3)})
            EXPECT_FALSE(is_wave_admissible(AdmissiblePair(q, r, s + eps, d)));
    }
}

TEST(Exponents, HolderSplit) {
    EXPECT_TRUE(holder_split_valid(HolderSplit(Rational(1, 2), {Rational(1, 4), Rational(1, 4)})));
    EXPECT_TRUE(holder_split_valid(HolderSplit(Rational(11, 14), {Rational(1, 2), Rational(2, 7)})));
    EXPECT_FALSE(holder_split_valid(HolderSplit(Rational(1, 2), {Rational(1, 3), Rational(1, 4)})));
    EXPECT_THROW(HolderSplit(Rational(3, 2), {}), DomainError);
}

TEST(Exponents, DecayWindowExamples) {
    EXPECT_EQ(decay_R_window(6), std::make_pair(Rational(10, 3), Rational(18, 5)));
    EXPECT_EQ(decay_R_window(7), std::make_pair(Rational(3), Rational(7, 2)));
    EXPECT_EQ(decay_R_window(10), std::make_pair(Rational(18, 7), Rational(10, 3)));
    EXPECT_THROW(decay_R_window(5), DomainError);
}

TEST(Exponents, DecayWindowPositiveWidthUpTo1000) {
    for (int d = 6; d <= 1000; ++d) {
        auto [lo, hi] = decay_R_window(d);
        EXPECT_LT(lo, hi) << "d = " << d;
    }
}

TEST(Exponents, ClaimDatabaseMatchesOracle) {
    for (int d = 6; d <= 64; ++d) {
        ClaimReport report = verify_paper_claims(d);
        auto expected = oracle(d);
        ASSERT_EQ(report.results.size(), expected.size());
        for (const auto& res : report.results) {
            ASSERT_TRUE(expected.count(res.id)) << res.id;
            EXPECT_EQ(res.holds, expected[res.id]) << res.id << " at d = " << d;
        }
        EXPECT_EQ(report.failures(), 0u) << "d = " << d;
    }
}

TEST(Exponents, ClaimsHoldAtLargeDimension) {
    for (int d : {100, 257, 1000}) EXPECT_TRUE(verify_paper_claims(d).all_passed()) << d;
}

TEST(Exponents, StabilityPairIsAdmissibleWithSlack) {
    // The stability pair satisfies the scaling relation exactly and the gap
    // condition strictly: 1/q + (d-1)/(2r) = (d-1)^2/(4d).
    for (int d = 6; d <= 30; ++d) {
        AdmissiblePair pair(d + 1, Rational(2LL * d * (d * d - 1), 1LL * d * d * d - d * d - 5 * d + 1),
                            Rational(d + 1, 2 * (d - 1)), d);
        EXPECT_TRUE(pair.scaling_residual().is_zero());
        EXPECT_EQ(pair.gap_slack(), Rational(d - 1, 4) - Rational((d - 1) * (d - 1), 4 * d));
    }
}

TEST(Exponents, PerturbedClaimFails) {
    const auto& db = claim_database();
    for (const auto& claim : db) {
        if (!std::holds_alternative<AdmissibleClaim>(claim.body)) continue;
        Claim bad = perturb_claim(claim, Rational(1, 100));
        ClaimResult res = evaluate_claim(bad, 6);
        EXPECT_FALSE(res.holds) << claim.id;
        EXPECT_FALSE(res.passed());
        EXPECT_EQ(res.residual, Rational(1, 100)) << claim.id;
    }
}

TEST(Exponents, ResidualsAreZeroForEqualities) {
    ClaimReport report = verify_paper_claims(6);
    for (const auto& res : report.results)
        if (res.id[0] == 'H' || res.id[0] == 'I' || res.id[0] == 'S') { EXPECT_TRUE(res.residual.is_zero()) << res.id; }
}
