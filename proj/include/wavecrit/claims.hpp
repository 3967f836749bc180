#pragma once

// Exponent claims used by the local theory, the stability estimate and the
// low-frequency decay argument, stored as data. Polynomials in d are written
// as coefficient lists from the constant term upward, so {-3, 1} is d - 3.

#include <vector>

#include "wavecrit/exponents.hpp"

namespace wavecrit::exponents {

namespace detail {

inline RatFn poly(std::vector<long long> num) { return RatFn{std::move(num), {1}}; }
inline RatFn frac(std::vector<long long> num, std::vector<long long> den) {
    return RatFn{std::move(num), std::move(den)};
}

// Recurring quantities.
inline RatFn s_c() { return frac({-2, 1}, {2}); }                           // (d-2)/2
inline RatFn alpha() { return frac({1, -4, 1}, {-2, 2}); }                  // (d^2-4d+1)/(2(d-1))
inline RatFn one() { return poly({1}); }
inline RatFn inv_d_plus_1() { return frac({1}, {1, 1}); }                   // 1/(d+1)
inline RatFn half() { return frac({1}, {2}); }
inline RatFn low_index() { return frac({-3, 1}, {-2, 2}); }                 // (d-3)/(2(d-1))
inline RatFn high_index() { return frac({1, 1}, {-2, 2}); }                 // (d+1)/(2(d-1))
inline RatFn p_prime_lemma() { return frac({5, 1}, {2, 2}); }               // (d+5)/(2(d+1))
inline RatFn p_prime_stab() { return frac({-7, 2, 1}, {-2, 0, 2}); }        // (d^2+2d-7)/(2(d^2-1))
inline RatFn r_endpoint() { return frac({1, -5, -1, 1}, {0, -2, 0, 2}); }   // (d^3-d^2-5d+1)/(2d(d^2-1))
inline RatFn r_lo() { return frac({-2, 2}, {-3, 1}); }                      // 2(d-1)/(d-3)
inline RatFn q_mid() { return frac({-2, -1, 1}, {-6, 2}); }                 // (d^2-d-2)/(2(d-3))

inline Claim admissible(std::string id, std::string description, std::string formula, RatFn q, RatFn r,
                        RatFn s) {
    return Claim{std::move(id), std::move(description), std::move(formula),
                 AdmissibleClaim{false, std::move(q), std::move(r), std::move(s)}};
}

inline Claim holder(std::string id, std::string description, std::string formula, RatFn target,
                    std::vector<RatFn> parts) {
    return Claim{std::move(id), std::move(description), std::move(formula),
                 HolderClaim{std::move(target), std::move(parts)}};
}

inline Claim compare(std::string id, std::string description, std::string formula, Terms lhs, Relation rel,
                     Terms rhs) {
    return Claim{std::move(id), std::move(description), std::move(formula),
                 CompareClaim{std::move(lhs), rel, std::move(rhs)}};
}

inline std::vector<Claim> build_database() {
    std::vector<Claim> db;

    // Admissible pairs.
    db.push_back(admissible("A1", "scattering norm L^{d+1}_{t,x} is critical admissible",
                            "(d+1, d+1) in H^{(d-2)/2}", poly({1, 1}), poly({1, 1}), s_c()));
    db.push_back(admissible("A2", "nonlinear estimate pair for the product rule",
                            "(2(d+1)/(d-3), 2(d^2-1)/(d^2-2d+5)) in H^{(d-3)/(2(d-1))}",
                            frac({2, 2}, {-3, 1}), frac({-2, 0, 2}, {5, -2, 1}), low_index()));
    db.push_back(admissible("A3", "endpoint-in-time pair for the derivative estimate",
                            "(2, 2(d-1)/(d-3)) in H^{(d+1)/(2(d-1))}", poly({2}), r_lo(), high_index()));
    db.push_back(admissible("A4", "pair used for the stability estimate",
                            "(d+1, 2d(d^2-1)/(d^3-d^2-5d+1)) in H^{(d+1)/(2(d-1))}", poly({1, 1}),
                            frac({0, -2, 0, 2}, {1, -5, -1, 1}), high_index()));
    {
        Claim energy = admissible("A5", "energy pair", "(inf, 2) in H^0", poly({2}), poly({2}), poly({0}));
        std::get<AdmissibleClaim>(energy.body).q_infinite = true;
        db.push_back(std::move(energy));
    }

    // Exponent identities.
    db.push_back(compare("I1", "derivative gap between s_c and alpha", "s_c - alpha = (d+1)/(2(d-1))",
                         Terms{{1, s_c()}, {-1, alpha()}}, Relation::Equal, high_index()));
    db.push_back(compare("I2", "derivative count carried by the nonlinearity", "1 + alpha - s_c = (d-3)/(2(d-1))",
                         Terms{{1, one()}, {1, alpha()}, {-1, s_c()}}, Relation::Equal, low_index()));
    db.push_back(compare("I3", "dual exponent of the product-rule pair", "1 - (d-3)/(2(d+1)) = (d+5)/(2(d+1))",
                         Terms{{1, one()}, {-1, frac({-3, 1}, {2, 2})}}, Relation::Equal, p_prime_lemma()));
    db.push_back(compare("I4", "dual exponent of the stability pair",
                         "1 - (d^2-2d+5)/(2(d^2-1)) = (d^2+2d-7)/(2(d^2-1))",
                         Terms{{1, one()}, {-1, frac({5, -2, 1}, {-2, 0, 2})}}, Relation::Equal, p_prime_stab()));

    // Hoelder splits.
    db.push_back(holder("H1", "product rule split, derivative on one factor", "(d+5)/(2(d+1)) = 1/2 + 2/(d+1)",
                        p_prime_lemma(), {half(), frac({2}, {1, 1})}));
    db.push_back(holder("H2", "stability split, difference factor in the low-index norm",
                        "(d^2+2d-7)/(2(d^2-1)) = (d-3)/(2(d-1)) + 2/(d+1)", p_prime_stab(),
                        {low_index(), frac({2}, {1, 1})}));
    db.push_back(holder("H3", "stability split, derivative moved to the endpoint factor",
                        "(d^2+2d-7)/(2(d^2-1)) = 1/(2d) + (d^3+d^2-7d+1)/(2d(d^2-1))", p_prime_stab(),
                        {frac({1}, {0, 2}), frac({1, -7, 1, 1}, {0, -2, 0, 2})}));
    db.push_back(holder("H4", "product rule split with one scattering-norm factor",
                        "(d+5)/(2(d+1)) = 1/(d+1) + (d+3)/(2(d+1))", p_prime_lemma(),
                        {inv_d_plus_1(), frac({3, 1}, {2, 2})}));
    db.push_back(holder("H5", "stability split with one scattering-norm factor",
                        "(d^2+2d-7)/(2(d^2-1)) = 1/(d+1) + (d^2-5)/(2(d^2-1))", p_prime_stab(),
                        {inv_d_plus_1(), frac({-5, 0, 1}, {-2, 0, 2})}));
    db.push_back(holder("H6", "inner split of the product rule remainder", "(d+3)/(2(d+1)) = 1/2 + 1/(d+1)",
                        frac({3, 1}, {2, 2}), {half(), inv_d_plus_1()}));
    db.push_back(holder("H7", "inner split of the stability remainder",
                        "(d^2-5)/(2(d^2-1)) = (d-3)/(2(d-1)) + 1/(d+1)", frac({-5, 0, 1}, {-2, 0, 2}),
                        {low_index(), inv_d_plus_1()}));
    db.push_back(holder("H8", "two scattering-norm factors", "2/(d+1) = 1/(d+1) + 1/(d+1)", frac({2}, {1, 1}),
                        {inv_d_plus_1(), inv_d_plus_1()}));
    db.push_back(holder("H9", "endpoint factor split", "(d^3+d^2-7d+1)/(2d(d^2-1)) = (d^3-d^2-5d+1)/(2d(d^2-1)) + 1/(d+1)",
                        frac({1, -7, 1, 1}, {0, -2, 0, 2}), {r_endpoint(), inv_d_plus_1()}));

    // Sobolev embedding indices, 1/p_out = 1/p_in - alpha/d.
    db.push_back(compare("S1", "embedding from the low-index pair into L^{2d}",
                         "1/(2d) = (d-3)/(2(d-1)) - (d^2-4d+1)/(2d(d-1))", frac({1}, {0, 2}), Relation::Equal,
                         Terms{{1, low_index()}, {-1, frac({1, -4, 1}, {0, -2, 2})}}));
    db.push_back(compare("S2", "embedding from the endpoint pair into L^{d+1}",
                         "1/(d+1) = (d^3-d^2-5d+1)/(2d(d^2-1)) - (d^2-4d+1)/(2d(d-1))", inv_d_plus_1(),
                         Relation::Equal, Terms{{1, r_endpoint()}, {-1, frac({1, -4, 1}, {0, -2, 2})}}));

    // Decay window.
    db.push_back(Claim{"W1", "decay exponent window is nonempty",
                       "2(d-1)/(d-3) < min{2d/(d-4), 3d/(d-1)}", WindowClaim{}});
    db.push_back(compare("W2", "dispersive gain is exactly 1 at the lower endpoint, so > 1 inside the window",
                         "(d-1)(1/2 - (d-3)/(2(d-1))) = 1",
                         Terms{{1, frac({-1, 1}, {2})}, {-1, frac({-3, 1}, {2})}}, Relation::Equal, one()));
    db.push_back(compare("W3", "decay rate at the lower endpoint exceeds (d-4)/2",
                         "(d-4)/2 < d - d(d-3)/(2(d-1)) - 3 = (d-2)(d-3)/(2(d-1))", frac({-4, 1}, {2}),
                         Relation::Less, Terms{{1, poly({-3, 1})}, {-1, frac({0, -3, 1}, {-2, 2})}}));
    db.push_back(compare("W4", "Bernstein gain at the lower endpoint is positive",
                         "0 < d/2 - d(d-3)/(2(d-1)) - 1 = 1/(d-1)", poly({0}), Relation::Less,
                         Terms{{1, frac({0, 1}, {2})}, {-1, frac({0, -3, 1}, {-2, 2})}, {-1, one()}}));
    db.push_back(compare("W5", "upper window endpoint stays below d", "3d/(d-1) < d", frac({0, 3}, {-1, 1}),
                         Relation::Less, poly({0, 1})));

    // Intermediate Lebesgue exponent of the decay argument.
    db.push_back(compare("Q1", "intermediate exponent above the window floor",
                         "2(d-1)/(d-3) < (d^2-d-2)/(2(d-3))", r_lo(), Relation::Less, q_mid()));
    db.push_back(compare("Q2", "intermediate exponent below d", "(d^2-d-2)/(2(d-3)) < d", q_mid(),
                         Relation::Less, poly({0, 1})));
    db.push_back(compare("Q3", "intermediate exponent above 4", "4 < (d^2-d-2)/(2(d-3))", poly({4}),
                         Relation::Less, q_mid()));
    db.push_back(compare("Q4", "intermediate exponent below d-1", "(d^2-d-2)/(2(d-3)) < d-1", q_mid(),
                         Relation::Less, poly({-1, 1})));
    db.push_back(compare("D1", "window floor below d-1", "2(d-1)/(d-3) < d-1", r_lo(), Relation::Less,
                         poly({-1, 1})));

    return db;
}

}  // namespace detail

inline const std::vector<Claim>& claim_database() {
    static const std::vector<Claim> db = detail::build_database();
    return db;
}

/// Copy of `claim` with its Sobolev index shifted by `delta`. Used to check that
/// a wrong claim is caught with a nonzero residual.
inline Claim perturb_claim(Claim claim, const Rational& delta) {
    if (!std::holds_alternative<AdmissibleClaim>(claim.body))
        throw DomainError("only admissibility claims carry a Sobolev index");
    claim.s_shift = claim.s_shift + delta;
    claim.expected = true;
    return claim;
}

}  // namespace wavecrit::exponents
