#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace serimat;
using testutil::Rng;
using S = Series<ExactScalar>;
using M = SeriesMatrix<ExactScalar>;

namespace {
S x(unsigned i, unsigned n = 2, unsigned cap = 6) { return S::variable(n, cap, i); }
S c(long v, unsigned n = 2, unsigned cap = 6) {
    return S::constant(n, cap, ExactScalar::from_int(v));
}
M kp_matrix(unsigned cap = 6) {
    M a(2, 2, 2, cap);
    a.at(0, 0) = x(0, 2, cap) * x(0, 2, cap);
    a.at(0, 1) = x(0, 2, cap) * x(1, 2, cap);
    a.at(1, 0) = x(0, 2, cap) * x(1, 2, cap);
    a.at(1, 1) = x(1, 2, cap) * x(1, 2, cap);
    return a;
}
} // namespace

TEST_CASE("KP discriminant Delta_2 = (X1^2 + X2^2)^2") {
    auto p = power_sums(kp_matrix(), 2);
    auto deltas = generalized_discriminants(p, 2);
    S s = x(0) * x(0) + x(1) * x(1);
    CHECK(deltas[0] == c(2));
    CHECK(deltas[1] == s * s);
}

TEST_CASE("Delta_3 for roots {X1, -X1, 0} is 4 X1^6, both routes") {
    std::vector<std::pair<S, unsigned>> roots{{x(0), 1}, {-x(0), 1}, {S(2, 6), 1}};
    auto oracle = discriminants_from_roots(roots);
    // power sums of the roots
    std::vector<S> p{c(3), S(2, 6), x(0) * x(0) * ExactScalar::from_int(2), S(2, 6),
                     x(0) * x(0) * x(0) * x(0) * ExactScalar::from_int(2)};
    auto hankel = generalized_discriminants(p, 3);
    S expect = S::monomial(2, 6, Exponent{6, 0}, ExactScalar::from_int(4));
    CHECK(hankel[2] == expect);
    CHECK(oracle[2] == expect);
    CHECK(oracle[0] == c(3));
    CHECK(oracle[1] == hankel[1]);
}

TEST_CASE("scalar family: Delta_l vanishes beyond l = 1") {
    M a = M::identity(3, 2, 6) * (x(0) + c(5));
    auto p = power_sums(a, 4);
    auto deltas = generalized_discriminants(p, 3);
    CHECK(deltas[0] == c(3));
    CHECK(deltas[1].is_zero());
    CHECK(deltas[2].is_zero());
    auto rep = hypothesis_check(a);
    CHECK(rep.l_star == 1);
    CHECK(rep.monomial_unit);
}

TEST_CASE("defining-sum oracle basics") {
    S a = x(0) + c(1);
    std::vector<std::pair<S, unsigned>> rep_root{{a, 2}};
    auto d = discriminants_from_roots(rep_root);
    CHECK(d[0] == c(2));
    CHECK(d[1].is_zero());

    std::vector<std::pair<S, unsigned>> two{{x(0), 1}, {x(1), 1}};
    auto d2 = discriminants_from_roots(two);
    S diff = x(0) - x(1);
    CHECK(d2[1] == diff * diff);

    std::vector<std::pair<S, unsigned>> big(7, {x(0), 1});
    CHECK_THROWS_AS(discriminants_from_roots(big), TooLarge);
}

TEST_CASE("Hankel route equals defining-sum route on random families") {
    Rng rng(41);
    for (int t = 0; t < 12; ++t) {
        unsigned d = 2 + t % 4; // up to 5
        unsigned n = 1 + t % 2;
        unsigned cap = 4 + t % 3; // up to 6
        std::vector<std::pair<S, unsigned>> roots;
        unsigned total = 0;
        while (total < d) {
            unsigned mult = 1 + (rng() % 2 == 0 && d - total > 1 ? 1 : 0);
            roots.emplace_back(testutil::random_series(rng, n, cap, 2), mult);
            total += mult;
        }
        std::vector<S> p;
        p.push_back(S::constant(n, cap, ExactScalar::from_int(static_cast<long>(d))));
        for (unsigned k = 1; k <= 2 * d - 2; ++k) {
            S s(n, cap);
            for (auto& [r, m] : roots) {
                S pw = S::constant(n, cap, ExactScalar::one());
                for (unsigned q = 0; q < k; ++q) pw *= r;
                s += pw * ExactScalar::from_int(static_cast<long>(m));
            }
            p.push_back(s);
        }
        auto hankel = generalized_discriminants(p, d);
        auto sums = discriminants_from_roots(roots);
        for (unsigned l = 1; l <= d; ++l) CHECK(hankel[l - 1] == sums[l - 1]);
    }
}

TEST_CASE("hypothesis_check examples") {
    SUBCASE("KP matrix fails the hypothesis") {
        auto rep = hypothesis_check(kp_matrix());
        CHECK(rep.l_star == 2);
        S s = x(0) * x(0) + x(1) * x(1);
        CHECK(rep.delta == s * s);
        CHECK_FALSE(rep.monomial_unit);
        CHECK_FALSE(rep.last_coeff_monomial_unit);
    }
    SUBCASE("diag(X1, X1 + X1 X2) passes with alpha = (2,2)") {
        M a(2, 2, 2, 6);
        a.at(0, 0) = x(0);
        a.at(1, 1) = x(0) + x(0) * x(1);
        auto rep = hypothesis_check(a);
        CHECK(rep.l_star == 2);
        CHECK(rep.monomial_unit);
        REQUIRE(rep.alpha.has_value());
        CHECK(*rep.alpha == Exponent{2, 2});
        // root-difference oracle: Delta_2 = (X1 X2)^2
        S d = x(0) * x(1);
        CHECK(rep.delta == d * d);
    }
    SUBCASE("constant diag(1, 2, 3)") {
        M a(3, 3, 2, 6);
        a.at(0, 0) = c(1);
        a.at(1, 1) = c(2);
        a.at(2, 2) = c(3);
        auto rep = hypothesis_check(a);
        CHECK(rep.l_star == 3);
        CHECK(rep.monomial_unit);
        CHECK(*rep.alpha == Exponent{0, 0});
        // brute force over the three root pairs: (1-2)^2 (1-3)^2 (2-3)^2 = 4
        CHECK(rep.delta == c(4));
        CHECK(rep.last_coeff_monomial_unit);
    }
}

TEST_CASE("hypothesis_check is invariant under constant unitary conjugation") {
    Rng rng(42);
    M a(2, 2, 2, 6);
    a.at(0, 0) = x(0);
    a.at(1, 1) = x(0) + x(0) * x(1);
    auto rep = hypothesis_check(a);
    for (int t = 0; t < 4; ++t) {
        auto q0 = testutil::random_unitary(rng, 2);
        auto qs = M::from_constant(q0, 2, 6);
        auto rep2 = hypothesis_check(qs.adjoint() * a * qs);
        CHECK(rep2.l_star == rep.l_star);
        CHECK(rep2.monomial_unit == rep.monomial_unit);
        CHECK(rep2.delta == rep.delta);
    }
}

TEST_CASE("multiplicity relation Delta = mu_1 ... mu_l Delta'") {
    SUBCASE("roots {a, a, b}") {
        S a = x(0) + c(1), b = x(1);
        std::vector<std::pair<S, unsigned>> roots{{a, 2}, {b, 1}};
        // build P from the roots
        std::vector<std::pair<S, unsigned>> flat = roots;
        CharPoly<ExactScalar> p{3, {}};
        S e1 = a + a + b, e2 = a * a + a * b + a * b, e3 = a * a * b;
        p.c = {-e1, e2, -e3};
        CHECK(multiplicity_relation_check(roots, p));
    }
    SUBCASE("simple roots: Delta_d is the discriminant") {
        std::vector<std::pair<S, unsigned>> roots{{x(0), 1}, {x(1), 1}};
        CharPoly<ExactScalar> p{2, {}};
        p.c = {-(x(0) + x(1)), x(0) * x(1)};
        CHECK(multiplicity_relation_check(roots, p));
    }
    SUBCASE("roots {X1, X1, X2, X2}: Delta_2 = 4 (X1 - X2)^2") {
        std::vector<std::pair<S, unsigned>> roots{{x(0), 2}, {x(1), 2}};
        S e1 = (x(0) + x(1)) * ExactScalar::from_int(2);
        S e2 = x(0) * x(0) + x(1) * x(1) + x(0) * x(1) * ExactScalar::from_int(4);
        S e3 = (x(0) * x(0) * x(1) + x(0) * x(1) * x(1)) * ExactScalar::from_int(2);
        S e4 = x(0) * x(0) * x(1) * x(1);
        CharPoly<ExactScalar> p{4, {}};
        p.c = {-e1, e2, -e3, e4};
        CHECK(multiplicity_relation_check(roots, p));
        // direct value check via the defining-sum oracle
        auto sums = discriminants_from_roots(roots);
        S diff = x(0) - x(1);
        CHECK(sums[1] == diff * diff * ExactScalar::from_int(4));
    }
}

TEST_CASE("coefficient ideal check") {
    SUBCASE("d=2, c2 = X1^2") {
        CharPoly<ExactScalar> p{2, {S(2, 6), x(0) * x(0)}};
        auto [ok, gamma] = coefficient_ideal_check(p);
        CHECK(ok);
        REQUIRE(gamma.has_value());
        CHECK(*gamma == Exponent{2, 0}); // g_2 = c_2^{2!/2} = c_2
    }
    SUBCASE("d=2, c2 = X1^2 + X2^2 fails") {
        CharPoly<ExactScalar> p{2, {S(2, 6), x(0) * x(0) + x(1) * x(1)}};
        auto [ok, gamma] = coefficient_ideal_check(p);
        CHECK_FALSE(ok);
    }
    SUBCASE("d=3, c2 = X1^2, c3 = X1^3 u") {
        unsigned cap = 8;
        S c2 = S::variable(2, cap, 0) * S::variable(2, cap, 0);
        S u = S::constant(2, cap, ExactScalar::from_int(2)) + S::variable(2, cap, 1);
        S c3 = S::monomial(2, cap, Exponent{3, 0}, ExactScalar::one()) * u;
        CharPoly<ExactScalar> p{3, {S(2, cap), c2, c3}};
        auto [ok, gamma] = coefficient_ideal_check(p);
        CHECK(ok);
        REQUIRE(gamma.has_value());
        CHECK(*gamma == Exponent{6, 0}); // g_2 = X1^6, g_3 = X1^6 u^2
    }
    SUBCASE("all coefficients zero") {
        CharPoly<ExactScalar> p{2, {S(2, 6), S(2, 6)}};
        CHECK_THROWS_AS(coefficient_ideal_check(p), AllCoefficientsZero);
    }
}
