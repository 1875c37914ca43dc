#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "serimat/diagonalize.hpp"
#include "serimat/discriminants.hpp"
#include "serimat/hensel.hpp"

namespace serimat::testutil {

using Rng = std::mt19937_64;

inline mpq_class random_rational(Rng& rng, long lo = -3, long hi = 3, long max_den = 3) {
    std::uniform_int_distribution<long> num(lo, hi), den(1, max_den);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline ExactScalar random_exact(Rng& rng, bool complex_part = true) {
    mpq_class re = random_rational(rng);
    mpq_class im = complex_part ? random_rational(rng) : mpq_class(0);
    return ExactScalar::make(re, 0, im, 0);
}

inline ExactScalar random_exact_nonzero(Rng& rng, bool complex_part = true) {
    for (;;) {
        ExactScalar s = random_exact(rng, complex_part);
        if (!s.is_zero()) return s;
    }
}

template <ScalarField K>
Series<K> convert_series(const Series<ExactScalar>& f);

template <>
inline Series<ExactScalar> convert_series<ExactScalar>(const Series<ExactScalar>& f) {
    return f;
}
template <>
inline Series<FloatScalar> convert_series<FloatScalar>(const Series<ExactScalar>& f) {
    Series<FloatScalar> g(f.nvars(), f.cap());
    for (auto& [a, c] : f.terms()) g.add_term(a, FloatScalar::from_exact(c));
    g.set_reliable(f.reliable());
    return g;
}

template <ScalarField K>
SeriesMatrix<K> convert_matrix(const SeriesMatrix<ExactScalar>& m) {
    SeriesMatrix<K> r(m.rows(), m.cols(), m.nvars(), m.cap());
    for (unsigned i = 0; i < m.rows(); ++i)
        for (unsigned j = 0; j < m.cols(); ++j) r.at(i, j) = convert_series<K>(m.at(i, j));
    return r;
}

inline Series<ExactScalar> random_series(Rng& rng, unsigned n, unsigned cap, unsigned terms,
                                         bool complex_part = true) {
    Series<ExactScalar> f(n, cap);
    std::uniform_int_distribution<unsigned> deg(0, cap);
    for (unsigned t = 0; t < terms; ++t) {
        Exponent a(n);
        unsigned budget = deg(rng);
        for (unsigned i = 0; i < n && budget > 0; ++i) {
            std::uniform_int_distribution<unsigned> part(0, budget);
            a[i] = part(rng);
            budget -= a[i];
        }
        f.add_term(a, random_exact(rng, complex_part));
    }
    return f;
}

// Constant exact unitary: Cayley transform of a random rational
// skew-Hermitian matrix.
inline KMatrix<ExactScalar> random_unitary(Rng& rng, unsigned d) {
    KMatrix<ExactScalar> s(d, d);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) s.at(i, j) = random_exact(rng);
    KMatrix<ExactScalar> skew = s - s.adjoint(); // skew-Hermitian
    ExactScalar half = ExactScalar::one() / ExactScalar::from_int(2);
    KMatrix<ExactScalar> id = KMatrix<ExactScalar>::identity(d);
    return (id - skew * half).inverse() * (id + skew * half);
}

// Normal family Q0 diag(d_i) Q0* with the given diagonal entries.
inline SeriesMatrix<ExactScalar> conjugated_diagonal(const KMatrix<ExactScalar>& q0,
                                                     const std::vector<Series<ExactScalar>>& d) {
    unsigned n = d.at(0).nvars(), cap = d.at(0).cap();
    unsigned dim = static_cast<unsigned>(d.size());
    SeriesMatrix<ExactScalar> dm(dim, dim, n, cap);
    for (unsigned i = 0; i < dim; ++i) dm.at(i, i) = d[i];
    auto qs = SeriesMatrix<ExactScalar>::from_constant(q0, n, cap);
    return qs * dm * qs.adjoint();
}

// Diagonal entries for the round-trip families: monomial-times-unit series
// whose pairwise differences are again monomial times unit. Built along an
// exponent chain with distinct constants inside each equal-exponent group.
inline std::vector<Series<ExactScalar>> chain_diagonal(Rng& rng, unsigned count, unsigned n,
                                                       unsigned cap) {
    std::vector<Series<ExactScalar>> out;
    Exponent g(n);
    std::uniform_int_distribution<unsigned> coord(0, n - 1), inc(0, 1);
    std::vector<long> used;
    for (unsigned i = 0; i < count; ++i) {
        if (i > 0) {
            unsigned steps = inc(rng);
            for (unsigned s = 0; s < steps; ++s) {
                Exponent next = g;
                next[coord(rng)] += 1;
                if (next.total_degree() + 2 <= cap) g = next;
            }
            if (g.total_degree() == 0) g[coord(rng)] += 1; // keep exponents moving
        }
        // constant distinct from every other entry sharing this exponent
        long c;
        std::uniform_int_distribution<long> pick(1, 9);
        do {
            c = pick(rng);
        } while (std::find(used.begin(), used.end(), c) != used.end());
        used.push_back(c);
        Series<ExactScalar> unit =
            Series<ExactScalar>::constant(n, cap, ExactScalar::from_int(c));
        // a couple of higher-order terms in the unit
        for (int t = 0; t < 2; ++t) {
            Exponent e(n);
            e[coord(rng)] += 1 + (t > 0 ? 1 : 0);
            unit.add_term(e, random_exact(rng, false));
        }
        out.push_back(unit.multiply_by_monomial(g));
    }
    return out;
}

// Canonically sorted copy, for multiset comparison.
template <ScalarField K>
std::vector<Series<K>> sorted_multiset(std::vector<Series<K>> v) {
    std::sort(v.begin(), v.end(),
              [](const Series<K>& a, const Series<K>& b) { return series_less(a, b); });
    return v;
}

// Dense Sylvester oracle: solve (I (x) A - B^T (x) I) vec(M) = vec(C)
// per monomial coefficient of C, by Gaussian elimination.
template <ScalarField K>
SeriesMatrix<K> dense_sylvester_solve(const KMatrix<K>& a, const KMatrix<K>& b,
                                      const SeriesMatrix<K>& c) {
    unsigned p = a.rows(), q = b.rows();
    unsigned dim = p * q;
    KMatrix<K> sys(dim, dim);
    // row index (i, j) ~ equation for entry (i, j); vec index (k, l) ~ M[k][l]
    auto idx = [&](unsigned i, unsigned j) { return i * q + j; };
    for (unsigned i = 0; i < p; ++i)
        for (unsigned j = 0; j < q; ++j) {
            for (unsigned k = 0; k < p; ++k)
                sys.at(idx(i, j), idx(k, j)) = sys.at(idx(i, j), idx(k, j)) + a.at(i, k);
            for (unsigned l = 0; l < q; ++l)
                sys.at(idx(i, j), idx(i, l)) = sys.at(idx(i, j), idx(i, l)) - b.at(l, j);
        }
    KMatrix<K> sys_inv = sys.inverse();

    // Collect the support of C and solve per exponent.
    SeriesMatrix<K> m(p, q, c.nvars(), c.cap());
    std::vector<Exponent> support;
    for (unsigned i = 0; i < p; ++i)
        for (unsigned j = 0; j < q; ++j)
            for (auto& [e, coef] : c.at(i, j).terms()) {
                bool seen = false;
                for (auto& s : support)
                    if (s == e) seen = true;
                if (!seen) support.push_back(e);
            }
    for (auto& e : support) {
        std::vector<K> rhs(dim, K::zero());
        for (unsigned i = 0; i < p; ++i)
            for (unsigned j = 0; j < q; ++j) rhs[idx(i, j)] = c.at(i, j).coeff(e);
        for (unsigned r = 0; r < dim; ++r) {
            K val = K::zero();
            for (unsigned s = 0; s < dim; ++s) val = val + sys_inv.at(r, s) * rhs[s];
            if (!is_zero(val)) m.at(r / q, r % q).add_term(e, val);
        }
    }
    return m;
}

// Characteristic polynomial oracle: cofactor expansion of det(Z I - A) over
// the polynomial ring in Z with series coefficients.
template <ScalarField K>
std::vector<Series<K>> charpoly_cofactor_oracle(const SeriesMatrix<K>& a) {
    unsigned d = a.rows(), n = a.nvars(), cap = a.cap();
    using ZPoly = std::vector<Series<K>>; // coefficients of Z^0, Z^1, ...
    auto zero = [&](unsigned len) { return ZPoly(len, Series<K>(n, cap)); };
    auto mul = [&](const ZPoly& x, const ZPoly& y) {
        ZPoly r = zero(static_cast<unsigned>(x.size() + y.size() - 1));
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
        return r;
    };
    auto add = [&](ZPoly x, const ZPoly& y) {
        if (y.size() > x.size()) x.resize(y.size(), Series<K>(n, cap));
        for (size_t i = 0; i < y.size(); ++i) x[i] += y[i];
        return x;
    };
    auto neg = [&](ZPoly x) {
        for (auto& s : x) s = -s;
        return x;
    };
    // entries of Z I - A as degree-1 polynomials
    std::vector<std::vector<ZPoly>> m(d, std::vector<ZPoly>(d, zero(2)));
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            m[i][j][0] = -a.at(i, j);
            if (i == j) m[i][j][1] = Series<K>::constant(n, cap, K::one());
        }
    // recursive Laplace expansion
    std::function<ZPoly(const std::vector<std::vector<ZPoly>>&)> det =
        [&](const std::vector<std::vector<ZPoly>>& mm) -> ZPoly {
        unsigned k = static_cast<unsigned>(mm.size());
        if (k == 1) return mm[0][0];
        ZPoly acc = zero(1);
        for (unsigned i = 0; i < k; ++i) {
            std::vector<std::vector<ZPoly>> minor;
            for (unsigned r = 0; r < k; ++r) {
                if (r == i) continue;
                minor.emplace_back(mm[r].begin() + 1, mm[r].end());
            }
            ZPoly term = mul(mm[i][0], det(minor));
            acc = add(acc, i % 2 == 0 ? term : neg(term));
        }
        return acc;
    };
    return det(m);
}

} // namespace serimat::testutil
