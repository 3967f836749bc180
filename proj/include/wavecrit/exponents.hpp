#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wavecrit/errors.hpp"
#include "wavecrit/rational.hpp"

namespace wavecrit::exponents {

/// s_c = (d - 2) / 2, the regularity left invariant by u -> lambda u(lambda t, lambda x).
inline Rational critical_regularity(int d) {
    if (d < 3) throw DomainError("critical regularity requires d >= 3");
    return Rational(d - 2, 2);
}

/// Derivative order used by the contraction space of the local theory: (d^2 - 4d + 1) / (2(d - 1)).
inline Rational alpha_exponent(int d) {
    if (d < 6) throw DomainError("alpha exponent requires d >= 6");
    return Rational(static_cast<long long>(d) * d - 4LL * d + 1, 2LL * (d - 1));
}

/// (q, r) together with the Sobolev index s it is claimed to be admissible for.
class AdmissiblePair {
public:
    AdmissiblePair(Exponent q, Rational r, Rational s, int d)
        : q_(std::move(q)), r_(std::move(r)), s_(std::move(s)), d_(d) {
        if (d_ < 2) throw DomainError("admissible pairs need d >= 2");
        if (!q_.is_infinite() && q_.value() < Rational(2)) throw DomainError("q must be >= 2");
        if (r_ < Rational(2)) throw DomainError("r must be >= 2");
    }

    const Exponent& q() const { return q_; }
    const Rational& r() const { return r_; }
    const Rational& s() const { return s_; }
    int d() const { return d_; }

    /// 1/q + d/r - (d/2 - s); zero exactly when the scaling relation holds.
    Rational scaling_residual() const {
        return q_.reciprocal() + Rational(d_) / r_ - (Rational(d_, 2) - s_);
    }
    /// (d-1)/4 - 1/q - (d-1)/(2r); nonnegative exactly when the Strichartz gap condition holds.
    Rational gap_slack() const {
        return Rational(d_ - 1, 4) - q_.reciprocal() - Rational(d_ - 1) / (Rational(2) * r_);
    }

private:
    Exponent q_;
    Rational r_;
    Rational s_;
    int d_;
};

inline bool is_wave_admissible(const AdmissiblePair& pair) {
    return pair.scaling_residual().is_zero() && pair.gap_slack().sign() >= 0;
}

/// 1/p = sum 1/p_i. Entries are reciprocal exponents and must lie in [0, 1].
class HolderSplit {
public:
    HolderSplit(Rational target, std::vector<Rational> parts)
        : target_(std::move(target)), parts_(std::move(parts)) {
        auto check = [](const Rational& x) {
            if (x < Rational(0) || x > Rational(1)) throw DomainError("Holder entry " + x.str() + " outside [0, 1]");
        };
        check(target_);
        for (const auto& p : parts_) check(p);
    }
    const Rational& target() const { return target_; }
    const std::vector<Rational>& parts() const { return parts_; }

    Rational residual() const {
        Rational sum(0);
        for (const auto& p : parts_) sum += p;
        return sum - target_;
    }

private:
    Rational target_;
    std::vector<Rational> parts_;
};

inline bool holder_split_valid(const HolderSplit& split) { return split.residual().is_zero(); }

/// Open interval of admissible R for the low-frequency decay estimate:
/// (2(d-1)/(d-3), min{2d/(d-4), 3d/(d-1)}).
inline std::pair<Rational, Rational> decay_R_window(int d) {
    if (d < 6) throw DomainError("decay window requires d >= 6");
    Rational lo(2LL * (d - 1), d - 3);
    Rational hi = min(Rational(2LL * d, d - 4), Rational(3LL * d, d - 1));
    if (!(lo < hi)) throw ConsistencyError("empty R window at d = " + std::to_string(d));
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Dimension-parametrized rational functions and the claim records built on them.

/// P(d) / Q(d) with integer coefficients listed from the constant term upward.
struct RatFn {
    std::vector<long long> num;
    std::vector<long long> den{1};

    Rational at(int d) const {
        auto eval = [d](const std::vector<long long>& c) {
            BigInt acc(0);
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * d + *it;
            return acc;
        };
        BigInt q = eval(den);
        if (q == 0) throw DomainError("rational function has a pole at d = " + std::to_string(d));
        return Rational(eval(num), q);
    }
};

/// Signed sum of rational functions.
struct Terms {
    std::vector<std::pair<int, RatFn>> terms;

    Terms() = default;
    Terms(RatFn f) { terms.emplace_back(1, std::move(f)); }  // NOLINT(google-explicit-constructor)
    Terms(std::initializer_list<std::pair<int, RatFn>> list) : terms(list) {}

    Rational at(int d) const {
        Rational sum(0);
        for (const auto& [sign, f] : terms) sum += sign > 0 ? f.at(d) : -f.at(d);
        return sum;
    }
};

struct AdmissibleClaim {
    bool q_infinite = false;
    RatFn q;
    RatFn r;
    RatFn s;
};

struct HolderClaim {
    RatFn target;
    std::vector<RatFn> parts;
};

enum class Relation { Equal, Less, LessEqual };

/// lhs (relation) rhs, both signed sums.
struct CompareClaim {
    Terms lhs;
    Relation relation = Relation::Equal;
    Terms rhs;
};

/// decay_R_window(d) is nonempty.
struct WindowClaim {};

using ClaimBody = std::variant<AdmissibleClaim, HolderClaim, CompareClaim, WindowClaim>;

struct Claim {
    std::string id;
    std::string description;
    std::string formula;
    ClaimBody body;
    bool expected = true;
    Rational s_shift{0};  // test hook: added to the Sobolev index of an admissibility claim
};

struct ClaimResult {
    std::string id;
    std::string formula;
    bool holds = false;
    bool expected = true;
    Rational residual;
    std::string detail;

    bool passed() const { return holds == expected; }
};

struct ClaimReport {
    int d = 0;
    std::vector<ClaimResult> results;

    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& r : results) n += r.passed() ? 0 : 1;
        return n;
    }
    bool all_passed() const { return failures() == 0; }
};

inline ClaimResult evaluate_claim(const Claim& claim, int d) {
    ClaimResult out;
    out.id = claim.id;
    out.formula = claim.formula;
    out.expected = claim.expected;

    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, AdmissibleClaim>) {
                Exponent q = body.q_infinite ? Exponent::infinity() : Exponent(body.q.at(d));
                Rational r = body.r.at(d);
                Rational s = body.s.at(d) + claim.s_shift;
                bool in_range = (q.is_infinite() || q.value() >= Rational(2)) && r >= Rational(2);
                if (!in_range) {
                    out.holds = false;
                    out.residual = Rational(0);
                    out.detail = "q or r below 2";
                    return;
                }
                AdmissiblePair pair(q, r, s, d);
                out.residual = pair.scaling_residual();
                out.holds = is_wave_admissible(pair);
                out.detail = "(q, r, s) = (" + q.str() + ", " + r.str() + ", " + s.str() +
                             "), gap slack " + pair.gap_slack().str();
            } else if constexpr (std::is_same_v<T, HolderClaim>) {
                std::vector<Rational> parts;
                for (const auto& p : body.parts) parts.push_back(p.at(d));
                HolderSplit split(body.target.at(d), parts);
                out.residual = split.residual();
                out.holds = holder_split_valid(split);
                out.detail = "1/p = " + split.target().str();
            } else if constexpr (std::is_same_v<T, CompareClaim>) {
                Rational lhs = body.lhs.at(d);
                Rational rhs = body.rhs.at(d);
                out.residual = lhs - rhs;
                switch (body.relation) {
                    case Relation::Equal: out.holds = lhs == rhs; break;
                    case Relation::Less: out.holds = lhs < rhs; break;
                    case Relation::LessEqual: out.holds = lhs <= rhs; break;
                }
                out.detail = lhs.str() + " vs " + rhs.str();
            } else {
                Rational lo(2LL * (d - 1), d - 3);
                Rational hi = min(Rational(2LL * d, d - 4), Rational(3LL * d, d - 1));
                out.residual = hi - lo;
                out.holds = lo < hi;
                out.detail = "(" + lo.str() + ", " + hi.str() + ")";
            }
        },
        claim.body);
    return out;
}

inline ClaimReport verify_claims(const std::vector<Claim>& database, int d) {
    ClaimReport report;
    report.d = d;
    for (const auto& claim : database) report.results.push_back(evaluate_claim(claim, d));
    return report;
}

/// Built-in claim database; defined in claims.hpp.
inline const std::vector<Claim>& claim_database();

/// Evaluates the built-in claim database at dimension d.
inline ClaimReport verify_paper_claims(int d) {
    if (d < 6) throw DomainError("claim database is stated for d >= 6");
    return verify_claims(claim_database(), d);
}

}  // namespace wavecrit::exponents

#include "wavecrit/claims.hpp"
