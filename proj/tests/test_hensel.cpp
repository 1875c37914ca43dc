#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace serimat;
using testutil::Rng;
using S = Series<ExactScalar>;
using M = SeriesMatrix<ExactScalar>;
using KM = KMatrix<ExactScalar>;
using P = Poly<ExactScalar>;

namespace {
ExactScalar ei(long v) { return ExactScalar::from_int(v); }
S x(unsigned i, unsigned n = 1, unsigned cap = 4) { return S::variable(n, cap, i); }
} // namespace

TEST_CASE("extended_euclid examples") {
    SUBCASE("(Z-1, Z+1) -> U = -1/2, V = 1/2") {
        P p{-ei(1), ei(1)}, q{ei(1), ei(1)};
        auto [u, v] = extended_euclid(p, q);
        CHECK(u == P{ei(1) / ei(-2)});
        CHECK(v == P{ei(1) / ei(2)});
        CHECK(u * p + v * q == P{ei(1)});
    }
    SUBCASE("(Z, Z) is not coprime") {
        P z{ei(0), ei(1)};
        CHECK_THROWS_AS(extended_euclid(z, z), NotCoprime);
    }
    SUBCASE("(Z^2 - 2Z, Z - 3): certificate verified by substitution") {
        P p{ei(0), ei(-2), ei(1)}, q{ei(-3), ei(1)};
        auto [u, v] = extended_euclid(p, q);
        CHECK(u * p + v * q == P{ei(1)});
        CHECK(u.degree() < q.degree());
        CHECK(v.degree() < p.degree());
    }
    SUBCASE("random coprime pairs satisfy the Bezout identity") {
        Rng rng(51);
        for (int t = 0; t < 30; ++t) {
            P p = P::from_roots({testutil::random_exact(rng), testutil::random_exact(rng)});
            P q = P::from_roots({testutil::random_exact(rng) + ei(10)}); // disjoint root
            auto [u, v] = extended_euclid(p, q);
            CHECK(u * p + v * q == P{ei(1)});
            CHECK(u.degree() < q.degree());
        }
    }
}

TEST_CASE("cohn_sylvester_solve") {
    SUBCASE("C = 0 gives M = 0") {
        KM a = KM::identity(2);
        a.at(1, 1) = ei(-1);
        KM b(1, 1);
        b.at(0, 0) = ei(3);
        M c0(2, 1, 1, 4);
        M m = cohn_sylvester_solve(a, b, c0);
        CHECK(m.is_zero_through(4));
    }
    SUBCASE("scalar equation A=[1], B=[-1] forces M = C/2") {
        KM a(1, 1), b(1, 1);
        a.at(0, 0) = ei(1);
        b.at(0, 0) = ei(-1);
        M c(1, 1, 1, 4);
        c.at(0, 0) = x(0) * ei(6);
        M m = cohn_sylvester_solve(a, b, c);
        CHECK(m.at(0, 0) == x(0) * ei(3));
    }
    SUBCASE("random exact instances match the dense oracle") {
        Rng rng(52);
        for (int t = 0; t < 15; ++t) {
            unsigned p = 1 + t % 3, q = 1 + (t / 2) % 2;
            // disjoint spectra via triangular matrices with disjoint diagonals
            KM a(p, p), b(q, q);
            for (unsigned i = 0; i < p; ++i) {
                a.at(i, i) = ei(static_cast<long>(i + 1));
                for (unsigned j = i + 1; j < p; ++j) a.at(i, j) = testutil::random_exact(rng);
            }
            for (unsigned i = 0; i < q; ++i) {
                b.at(i, i) = ei(-static_cast<long>(i + 5));
                for (unsigned j = i + 1; j < q; ++j) b.at(i, j) = testutil::random_exact(rng);
            }
            M c(p, q, 2, 3);
            for (unsigned i = 0; i < p; ++i)
                for (unsigned j = 0; j < q; ++j)
                    c.at(i, j) = testutil::random_series(rng, 2, 3, 3);
            M m = cohn_sylvester_solve(a, b, c);
            // A M - M B = C bit-exactly
            M am = M::from_constant(a, 2, 3) * m;
            M mb = m * M::from_constant(b, 2, 3);
            M res = am - mb - c;
            CHECK(res.is_zero_through(3));
            // equals the dense linear-solve oracle
            M oracle = testutil::dense_sylvester_solve(a, b, c);
            M diff = m - oracle;
            CHECK(diff.is_zero_through(3));
        }
    }
}

TEST_CASE("constant_normal_split") {
    SUBCASE("diag(1, -1) splits with Q0 = I") {
        KM a(2, 2);
        a.at(0, 0) = ei(1);
        a.at(1, 1) = ei(-1);
        auto cert = constant_normal_split(a);
        CHECK(cert.d1 + cert.d2 == 2);
        CHECK(cert.q0.adjoint() * cert.q0 == KM::identity(2));
        // block diagonal with the two eigenvalues
        KM m = cert.q0.adjoint() * a * cert.q0;
        CHECK(m.at(0, 1).is_zero());
        CHECK(m.at(1, 0).is_zero());
    }
    SUBCASE("[[0,1],[1,0]]: eigenvalues +-1, 1/sqrt2 entries") {
        KM a(2, 2);
        a.at(0, 1) = ei(1);
        a.at(1, 0) = ei(1);
        auto cert = constant_normal_split(a);
        CHECK(cert.q0.adjoint() * cert.q0 == KM::identity(2));
        KM m = cert.q0.adjoint() * a * cert.q0;
        CHECK(m.at(0, 1).is_zero());
        CHECK(m.at(1, 0).is_zero());
        // the normalizers are 1/sqrt2, exact in the extension
        ExactScalar inv_s2 = ExactScalar::one() / ExactScalar::sqrt2();
        CHECK(cert.q0.at(0, 0).abs2() == inv_s2.abs2());
    }
    SUBCASE("eigenvalues {2, 2, 5} split into blocks of sizes 1 and 2") {
        Rng rng(53);
        auto q = testutil::random_unitary(rng, 3);
        KM d(3, 3);
        d.at(0, 0) = ei(2);
        d.at(1, 1) = ei(2);
        d.at(2, 2) = ei(5);
        KM a = q * d * q.adjoint();
        auto cert = constant_normal_split(a);
        CHECK(((cert.d1 == 1 && cert.d2 == 2) || (cert.d1 == 2 && cert.d2 == 1)));
        KM m = cert.q0.adjoint() * a * cert.q0;
        // verify block structure by multiplication
        for (unsigned i = 0; i < cert.d1; ++i)
            for (unsigned j = cert.d1; j < 3; ++j) {
                CHECK(m.at(i, j).is_zero());
                CHECK(m.at(j, i).is_zero());
            }
        CHECK(cert.u_poly * cert.b1.char_poly() + cert.v_poly * cert.b2.char_poly() ==
              P{ei(1)});
    }
    SUBCASE("single eigenvalue is rejected") {
        CHECK_THROWS_AS(constant_normal_split(KM::identity(2)), SingleEigenvalue);
    }
    SUBCASE("spectrum outside Q(i, sqrt 2) is rejected") {
        // [[1,1],[1,-1]] is symmetric with eigenvalues +-sqrt(2): splits
        KM b(2, 2);
        b.at(0, 0) = ei(1);
        b.at(0, 1) = ei(1);
        b.at(1, 0) = ei(1);
        b.at(1, 1) = ei(-1);
        auto cert = constant_normal_split(b);
        CHECK(cert.d1 + cert.d2 == 2);
        // [[0,1],[1,1]] has eigenvalues (1 +- sqrt 5)/2: outside the field
        KM e(2, 2);
        e.at(0, 1) = ei(1);
        e.at(1, 0) = ei(1);
        e.at(1, 1) = ei(1);
        CHECK_THROWS_AS(constant_normal_split(e), SpectrumNotSplit);
    }
}

TEST_CASE("hensel_split") {
    SUBCASE("already block diagonal with coprime constant blocks: U = I") {
        M a(2, 2, 1, 4);
        a.at(0, 0) = S::constant(1, 4, ei(1)) + x(0);
        a.at(1, 1) = S::constant(1, 4, ei(-1)) + x(0) * x(0);
        auto cert = constant_normal_split(a.constant_term());
        // constant split of diag(1,-1) keeps coordinates; conjugate anyway
        M q0 = M::from_constant(cert.q0, 1, 4);
        M ac = q0.adjoint() * a * q0;
        auto hs = hensel_split(ac, cert);
        CHECK(is_unitary(hs.u));
        M id = M::identity(2, 1, 4);
        M diff = hs.u - id;
        CHECK(diff.is_zero_through(4));
    }
    SUBCASE("[[1, X],[X, -1]] splits into +-sqrt(1 + X^2)") {
        M a(2, 2, 1, 4);
        a.at(0, 0) = S::constant(1, 4, ei(1));
        a.at(0, 1) = x(0);
        a.at(1, 0) = x(0);
        a.at(1, 1) = S::constant(1, 4, ei(-1));
        auto cert = constant_normal_split(a.constant_term());
        M q0 = M::from_constant(cert.q0, 1, 4);
        M ac = q0.adjoint() * a * q0;
        auto hs = hensel_split(ac, cert);
        CHECK(is_unitary(hs.u));
        CHECK(hs.u.at(0, 0).constant_term() == ExactScalar::one());
        // sqrt_unit oracle: eigenvalues are +-sqrt(1 + X^2)
        S root = (S::constant(1, 4, ei(1)) + x(0) * x(0)).sqrt_unit();
        S lam1 = hs.b1.at(0, 0), lam2 = hs.b2.at(0, 0);
        bool plus_first = equal_through_degree(lam1, root, 4);
        if (plus_first) {
            CHECK(equal_through_degree(lam2, -root, 4));
        } else {
            CHECK(equal_through_degree(lam1, -root, 4));
            CHECK(equal_through_degree(lam2, root, 4));
        }
        // explicit truncation: 1 + X^2/2 - X^4/8
        CHECK(root.coeff(Exponent{2}) == ExactScalar::from_rational(mpq_class(1, 2)));
        CHECK(root.coeff(Exponent{4}) == ExactScalar::from_rational(mpq_class(-1, 8)));
        // char poly multiplicativity: P_{U^-1 A U} = P_{B1} P_{B2} = P_A
        auto pa = char_poly(a);
        CHECK(equal_through_degree(pa.coeff(1), -(lam1 + lam2), 4));
        CHECK(equal_through_degree(pa.coeff(2), lam1 * lam2, 4));
    }
    SUBCASE("A(0) = I has a single eigenvalue: certificate stage rejects") {
        M a = M::identity(2, 1, 4);
        a.at(0, 1) = x(0);
        a.at(1, 0) = -x(0);
        CHECK_THROWS_AS(constant_normal_split(a.constant_term()), SingleEigenvalue);
    }
    SUBCASE("random normal families: unitarity and block structure, per-order assert quiet") {
        Rng rng(54);
        for (int t = 0; t < 6; ++t) {
            unsigned d = 2 + t % 2;
            auto q0c = testutil::random_unitary(rng, d);
            std::vector<S> diag;
            for (unsigned i = 0; i < d; ++i) {
                S u = S::constant(2, 4, ei(static_cast<long>(2 * i + 1)));
                u += testutil::random_series(rng, 2, 4, 2).multiply_by_monomial(Exponent{1, 0});
                diag.push_back(u);
            }
            M a = testutil::conjugated_diagonal(q0c, diag);
            auto cert = constant_normal_split(a.constant_term());
            M q0 = M::from_constant(cert.q0, 2, 4);
            M ac = q0.adjoint() * a * q0;
            auto hs = hensel_split(ac, cert);
            CHECK(is_unitary(hs.u));
            CHECK(hs.b1.rows() == cert.d1);
            CHECK(hs.b2.rows() == cert.d2);
            CHECK(is_normal(hs.b1));
            CHECK(is_normal(hs.b2));
            // the recombined matrix matches the conjugated input
            M rebuilt(d, d, 2, 4);
            rebuilt.set_block(0, 0, hs.b1);
            rebuilt.set_block(cert.d1, cert.d1, hs.b2);
            M lhs = hs.u.adjoint() * ac * hs.u;
            M res = lhs - rebuilt;
            CHECK(res.is_zero_through(res.reliable()));
        }
    }
}

TEST_CASE("skew correction shape") {
    M xblock(1, 2, 2, 4);
    xblock.at(0, 0) = x(0, 2, 4);
    xblock.at(0, 1) = S::variable(2, 4, 1) * ExactScalar::i();
    SkewCorrection<ExactScalar> corr{1, xblock};
    M u = corr.skew();
    M sum = u + u.adjoint();
    CHECK(sum.is_zero_through(4)); // u* = -u identically
}
