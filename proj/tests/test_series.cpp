#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace serimat;
using testutil::Rng;
using S = Series<ExactScalar>;

namespace {
S x(unsigned i, unsigned n = 2, unsigned cap = 6) { return S::variable(n, cap, i); }
S c(long v, unsigned n = 2, unsigned cap = 6) {
    return S::constant(n, cap, ExactScalar::from_int(v));
}
} // namespace

TEST_CASE("ring arithmetic basics") {
    S one = c(1);
    CHECK((one + x(0)) * (one - x(0)) == one - x(0) * x(0));
    // truncation kills X1^cap * X1
    S xc = S::monomial(2, 2, Exponent{2, 0}, ExactScalar::one());
    CHECK((xc * S::variable(2, 2, 0)).is_zero());
    // (X1 + X2)^2
    S s = x(0) + x(1);
    S sq = s * s;
    CHECK(sq.coeff(Exponent{2, 0}) == ExactScalar::one());
    CHECK(sq.coeff(Exponent{1, 1}) == ExactScalar::from_int(2));
    CHECK(sq.coeff(Exponent{0, 2}) == ExactScalar::one());
}

TEST_CASE("ring laws on random series, bit-exact") {
    Rng rng(21);
    for (int t = 0; t < 60; ++t) {
        unsigned n = 1 + static_cast<unsigned>(t % 3);
        unsigned cap = 3 + static_cast<unsigned>(t % 4);
        S f = testutil::random_series(rng, n, cap, 4);
        S g = testutil::random_series(rng, n, cap, 4);
        S h = testutil::random_series(rng, n, cap, 4);
        CHECK((f * g) * h == f * (g * h));
        CHECK(f * (g + h) == f * g + f * h);
        CHECK(f * g == g * f);
    }
}

TEST_CASE("invert_unit") {
    S f = c(1) + x(0);
    S inv = f.invert_unit();
    // geometric series 1 - X1 + X1^2 - ...
    CHECK(inv.coeff(Exponent{0, 0}) == ExactScalar::one());
    CHECK(inv.coeff(Exponent{1, 0}) == -ExactScalar::one());
    CHECK(inv.coeff(Exponent{2, 0}) == ExactScalar::one());
    CHECK(equal_through_degree(f * inv, c(1), 6));

    CHECK(c(2).invert_unit() == S::constant(2, 6, ExactScalar::from_rational(mpq_class(1, 2))));

    // 1 + X1 + X2 at cap 2: check by multiplying back
    S g = S::constant(2, 2, ExactScalar::one()) + S::variable(2, 2, 0) + S::variable(2, 2, 1);
    S ginv = g.invert_unit();
    CHECK(equal_through_degree(g * ginv, S::constant(2, 2, ExactScalar::one()), 2));
    CHECK(ginv.coeff(Exponent{1, 1}) == ExactScalar::from_int(2));

    CHECK_THROWS_AS(x(0).invert_unit(), NotAUnit);

    Rng rng(22);
    for (int t = 0; t < 40; ++t) {
        S u = testutil::random_series(rng, 2, 5, 4) + c(1, 2, 5) * ExactScalar::from_int(5);
        if (is_zero(u.constant_term())) continue;
        CHECK(equal_through_degree(u * u.invert_unit(), S::constant(2, 5, ExactScalar::one()), 5));
    }
}

TEST_CASE("conj_series") {
    S f = x(0) * ExactScalar::make(1, 0, 1, 0); // (1+i) X1
    CHECK(conj(f) == x(0) * ExactScalar::make(1, 0, -1, 0));
    S real = c(3) + x(1) * ExactScalar::from_int(2);
    CHECK(conj(real) == real);
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        S a = testutil::random_series(rng, 2, 4, 4);
        S b = testutil::random_series(rng, 2, 4, 4);
        CHECK(conj(conj(a)) == a);
        CHECK(conj(a * b) == conj(a) * conj(b));
    }
}

TEST_CASE("monomial content and monomial-times-unit") {
    // X1^2 X2 + X1^3 X2^2 -> (2, 1)
    S f = S::monomial(2, 6, Exponent{2, 1}, ExactScalar::one()) +
          S::monomial(2, 6, Exponent{3, 2}, ExactScalar::one());
    CHECK(f.monomial_content() == Exponent{2, 1});
    CHECK((c(1) + x(0)).monomial_content() == Exponent{0, 0});
    S g = S::monomial(2, 6, Exponent{1, 3}, ExactScalar::one()) +
          S::monomial(2, 6, Exponent{2, 1}, ExactScalar::one());
    CHECK(g.monomial_content() == Exponent{1, 1});
    CHECK_THROWS_AS(S(2, 6).monomial_content(), ZeroSeries);

    // X1^2 X2 (3 + X1) is monomial times unit
    S h = S::monomial(2, 6, Exponent{2, 1}, ExactScalar::one()) * (c(3) + x(0));
    auto w = h.is_monomial_times_unit();
    REQUIRE(w.has_value());
    CHECK(*w == Exponent{2, 1});
    // X1^2 + X2^2 is not
    CHECK_FALSE((x(0) * x(0) + x(1) * x(1)).is_monomial_times_unit().has_value());
    CHECK_FALSE(S(2, 6).is_monomial_times_unit().has_value());

    Rng rng(24);
    for (int t = 0; t < 40; ++t) {
        S u = testutil::random_series(rng, 2, 6, 3) + c(7);
        Exponent g2{static_cast<uint32_t>(t % 3), static_cast<uint32_t>(t % 2)};
        auto w2 = u.multiply_by_monomial(g2).is_monomial_times_unit();
        REQUIRE(w2.has_value());
        CHECK(*w2 == g2);
    }
}

TEST_CASE("divide_by_monomial") {
    S f = S::monomial(2, 6, Exponent{2, 1}, ExactScalar::one()) +
          S::monomial(2, 6, Exponent{3, 0}, ExactScalar::one());
    SUBCASE("exact division") {
        S q = f.divide_by_monomial(Exponent{2, 0});
        CHECK(q == x(1) + x(0));
        CHECK(q.reliable() == 4); // lost two orders
    }
    SUBCASE("identity exponent") { CHECK(f.divide_by_monomial(Exponent{0, 0}) == f); }
    SUBCASE("not divisible") {
        CHECK_THROWS_AS(f.divide_by_monomial(Exponent{0, 1}), NotDivisible);
    }
    S g = S::monomial(2, 6, Exponent{1, 2}, ExactScalar::one()) +
          S::monomial(2, 6, Exponent{2, 2}, ExactScalar::one());
    CHECK(g.divide_by_monomial(Exponent{1, 2}) == c(1) + x(0));
}

TEST_CASE("sqrt_unit") {
    S f = c(1) + x(0) * ExactScalar::from_int(2) + x(0) * x(0);
    CHECK(equal_through_degree(f.sqrt_unit(), c(1) + x(0), 6));

    S g = S::constant(1, 2, ExactScalar::one()) + S::variable(1, 2, 0);
    S r = g.sqrt_unit();
    CHECK(equal_through_degree(r * r, g, 2));
    CHECK(r.coeff(Exponent{1}) == ExactScalar::from_rational(mpq_class(1, 2)));
    CHECK(r.coeff(Exponent{2}) == ExactScalar::from_rational(mpq_class(-1, 8)));

    CHECK(c(4).sqrt_unit() == c(2));

    Rng rng(25);
    for (int t = 0; t < 30; ++t) {
        S u = testutil::random_series(rng, 2, 5, 3, false) + c(3, 2, 5);
        if (is_zero(u.constant_term())) continue;
        S sq = u * u;
        S root = sq.sqrt_unit();
        CHECK(equal_through_degree(root * root, sq, 5));
    }
    CHECK_THROWS_AS(x(0).sqrt_unit(), NotAUnit);
    CHECK_THROWS_AS(c(3).sqrt_unit(), NotASquareInField);
}

TEST_CASE("substitution") {
    // f = X1^2 + X2^2, X2 -> X1 X2 gives X1^2 (1 + X2^2)
    S f = x(0) * x(0) + x(1) * x(1);
    std::vector<S> map{x(0), S::monomial(2, 6, Exponent{1, 1}, ExactScalar::one())};
    S sub = f.substitute(map);
    CHECK(sub == x(0) * x(0) * (c(1) + x(1) * x(1)));

    std::vector<S> idmap{x(0), x(1)};
    CHECK(f.substitute(idmap) == f);

    CHECK(x(0).substitute(map) == x(0));
    CHECK(x(1).substitute(map) == S::monomial(2, 6, Exponent{1, 1}, ExactScalar::one()));

    std::vector<S> bad{c(1) + x(0), x(1)};
    CHECK_THROWS_AS(f.substitute(bad), OrderViolation);

    // direct term-substitution oracle on random inputs
    Rng rng(26);
    for (int t = 0; t < 20; ++t) {
        S g = testutil::random_series(rng, 2, 5, 4);
        std::vector<S> m{S::variable(2, 5, 0),
                         S::monomial(2, 5, Exponent{1, 1}, ExactScalar::one())};
        S expect(2, 5);
        for (auto& [e, coef] : g.terms()) {
            S term = S::constant(2, 5, coef);
            for (unsigned k = 0; k < e[0]; ++k) term *= m[0];
            for (unsigned k = 0; k < e[1]; ++k) term *= m[1];
            expect += term;
        }
        CHECK(g.substitute(m) == expect);
    }
}

TEST_CASE("order and zero conventions") {
    CHECK_FALSE(S(2, 6).order().has_value()); // zero series: order infinity
    CHECK(*x(0).order() == 1);
    CHECK(*c(5).order() == 0);
    CHECK(S(2, 6).is_zero_mod_reliable());
}

TEST_CASE("reliable degree propagation through multiplication") {
    S f = S::monomial(2, 6, Exponent{2, 0}, ExactScalar::one()) +
          S::monomial(2, 6, Exponent{3, 0}, ExactScalar::one());
    S q = f.divide_by_monomial(Exponent{2, 0}); // reliable 4
    CHECK(q.reliable() == 4);
    // multiplying by the monomial restores the full cap
    CHECK(q.multiply_by_monomial(Exponent{2, 0}).reliable() == 6);
    // a product with a unit keeps the reduced reliability
    CHECK((q * (c(1) + x(0))).reliable() == 4);
    // a product with something of order 2 is reliable further out
    CHECK((q * S::monomial(2, 6, Exponent{2, 0}, ExactScalar::one())).reliable() == 6);
    // sums take the minimum
    CHECK((q + c(1)).reliable() == 4);
}

TEST_CASE("float backend series prune below tolerance") {
    FloatScalar::configure(256, "2^-128");
    Series<FloatScalar> f(2, 4);
    f.add_term(Exponent{1, 0}, FloatScalar(FloatScalar::parse_tolerance("2^-200"), 0));
    CHECK(f.is_zero());
    f.add_term(Exponent{1, 0}, FloatScalar::one());
    CHECK_FALSE(f.is_zero());
}
