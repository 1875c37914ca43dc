#pragma once

#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "serimat/runtime.hpp"
#include "serimat/series_matrix.hpp"

namespace serimat {

// Certificate that A(0) splits: a constant unitary putting it into block
// diagonal form with coprime characteristic polynomials, the Bezout pair
// witnessing coprimality, and the cached Cohn data reused by every
// per-order Sylvester solve.
template <ScalarField K>
struct SplitCertificate {
    unsigned d1 = 0, d2 = 0;
    KMatrix<K> q0{0, 0};      // unitary; q0* A(0) q0 = diag(b1, b2)
    KMatrix<K> b1{0, 0}, b2{0, 0};
    Poly<K> u_poly, v_poly;   // u * P_{b1} + v * P_{b2} = 1
    Poly<K> cohn_q;           // Q = v * P_{b2}; Q(b1) = I, Q(b2) = 0
    std::vector<KMatrix<K>> b1_powers; // b1^0 .. b1^{r-1}
    std::vector<KMatrix<K>> b2_suffix; // S_k = sum_{j>=0} q_{k+1+j} b2^j
};

// Skew-Hermitian correction of one homogeneous order: the tangent direction
// [[0, x], [-x*, 0]] whose Cayley transform cancels the off-diagonal block.
template <ScalarField K>
struct SkewCorrection {
    unsigned degree;
    SeriesMatrix<K> x; // d1 x d2, homogeneous entries of this degree

    SeriesMatrix<K> skew() const {
        unsigned d1 = x.rows(), d2 = x.cols();
        SeriesMatrix<K> u(d1 + d2, d1 + d2, x.nvars(), x.cap());
        u.set_block(0, d1, x);
        u.set_block(d1, 0, -x.adjoint());
        return u;
    }
};

// Explicit Sylvester solve A M - M B = C (Cohn): with Q = V P_B one has
// Q(A) = I, Q(B) = 0 and M = sum_i q_i sum_k A^k C B^{i-k-1}. The
// construction is linear in C, so it applies verbatim to a matrix of series
// (equivalently: monomial by monomial).
template <ScalarField K>
SeriesMatrix<K> cohn_sylvester_solve(const KMatrix<K>& a, const KMatrix<K>& b,
                                     const SeriesMatrix<K>& c) {
    if (a.rows() != c.rows() || b.rows() != c.cols())
        throw DimensionMismatch("cohn_sylvester_solve shapes");
    Poly<K> pa = a.char_poly(), pb = b.char_poly();
    auto [u, v] = extended_euclid(pa, pb); // throws NotCoprime
    Poly<K> q = v * pb;
    int r = q.degree();
    if (r < 1) throw NotCoprime("degenerate Cohn polynomial");

    // M = sum_k A^k C S_k with S_k = sum_{j >= 0} q_{k+1+j} B^j.
    std::vector<KMatrix<K>> suffix(static_cast<size_t>(r), KMatrix<K>(b.rows(), b.rows()));
    KMatrix<K> id = KMatrix<K>::identity(b.rows());
    suffix[r - 1] = id * q.coeff(static_cast<unsigned>(r));
    for (int k = r - 2; k >= 0; --k)
        suffix[k] = id * q.coeff(static_cast<unsigned>(k + 1)) + suffix[k + 1] * b;

    SeriesMatrix<K> m(c.rows(), c.cols(), c.nvars(), c.cap());
    SeriesMatrix<K> akc = c; // A^k C
    for (int k = 0; k < r; ++k) {
        if (k > 0) akc = SeriesMatrix<K>::from_constant(a, c.nvars(), c.cap()) * akc;
        m = m + akc * SeriesMatrix<K>::from_constant(suffix[k], c.nvars(), c.cap());
    }
    return m;
}

namespace detail {

// Same solve but against a prebuilt certificate (the Euclid step and the
// constant powers are paid once per split, not once per order).
template <ScalarField K>
SeriesMatrix<K> cohn_apply(const SplitCertificate<K>& cert, const SeriesMatrix<K>& c) {
    SeriesMatrix<K> m(c.rows(), c.cols(), c.nvars(), c.cap());
    for (size_t k = 0; k < cert.b2_suffix.size(); ++k) {
        SeriesMatrix<K> t =
            SeriesMatrix<K>::from_constant(cert.b1_powers[k], c.nvars(), c.cap()) * c;
        m = m + t * SeriesMatrix<K>::from_constant(cert.b2_suffix[k], c.nvars(), c.cap());
    }
    return m;
}

} // namespace detail

// Splits the spectrum of a constant normal matrix two ways: the cluster
// farthest from the spectral mean against the rest. Exact backend: the
// characteristic polynomial must split over Q(i, sqrt 2); float backend:
// Jacobi sweeps on the commuting Hermitian parts.
template <ScalarField K>
SplitCertificate<K> constant_normal_split(const KMatrix<K>& a0) {
    if (a0.rows() != a0.cols()) throw NotSquare("constant_normal_split");
    unsigned n = a0.rows();
    auto eig = eigen_normal(a0);

    // Distinct eigenvalue clusters, in encounter order of the columns.
    std::vector<std::vector<unsigned>> clusters;
    std::vector<K> values;
    auto same = [&](const K& x, const K& y) {
        if constexpr (K::exact) {
            return x == y;
        } else {
            mpf_class e = FloatScalar::context().eps;
            mpf_class scale2 = 1 + x.abs2() + y.abs2();
            return (x - y).abs2() <= e * scale2;
        }
    };
    for (unsigned j = 0; j < n; ++j) {
        bool placed = false;
        for (size_t c = 0; c < values.size(); ++c)
            if (same(values[c], eig.values[j])) {
                clusters[c].push_back(j);
                placed = true;
                break;
            }
        if (!placed) {
            values.push_back(eig.values[j]);
            clusters.push_back({j});
        }
    }
    if (clusters.size() < 2) throw SingleEigenvalue("constant part has a single eigenvalue");

    // Mean of the full spectrum; pick the cluster value farthest from it.
    K mean = K::zero();
    for (auto& v : eig.values) mean = mean + v;
    mean = mean / K::from_int(static_cast<long>(n));
    size_t pick = 0;
    typename K::Real best = (values[0] - mean).abs2();
    for (size_t c = 1; c < values.size(); ++c) {
        auto dist = (values[c] - mean).abs2();
        if (best < dist) {
            best = dist;
            pick = c;
        }
    }

    std::vector<unsigned> order = clusters[pick];
    for (size_t c = 0; c < clusters.size(); ++c)
        if (c != pick) order.insert(order.end(), clusters[c].begin(), clusters[c].end());

    SplitCertificate<K> cert;
    cert.d1 = static_cast<unsigned>(clusters[pick].size());
    cert.d2 = n - cert.d1;
    cert.q0 = KMatrix<K>(n, n);
    for (unsigned j = 0; j < n; ++j)
        for (unsigned i = 0; i < n; ++i) cert.q0.at(i, j) = eig.q.at(i, order[j]);

    KMatrix<K> m = cert.q0.adjoint() * a0 * cert.q0;
    cert.b1 = KMatrix<K>(cert.d1, cert.d1);
    cert.b2 = KMatrix<K>(cert.d2, cert.d2);
    for (unsigned i = 0; i < cert.d1; ++i)
        for (unsigned j = 0; j < cert.d1; ++j) cert.b1.at(i, j) = m.at(i, j);
    for (unsigned i = 0; i < cert.d2; ++i)
        for (unsigned j = 0; j < cert.d2; ++j) cert.b2.at(i, j) = m.at(cert.d1 + i, cert.d1 + j);

    Poly<K> p1 = cert.b1.char_poly(), p2 = cert.b2.char_poly();
    std::tie(cert.u_poly, cert.v_poly) = extended_euclid(p1, p2);
    cert.cohn_q = cert.v_poly * p2;
    int r = cert.cohn_q.degree();
    if (r < 1) throw NotCoprime("degenerate Cohn polynomial");

    cert.b1_powers.clear();
    cert.b1_powers.push_back(KMatrix<K>::identity(cert.d1));
    for (int k = 1; k < r; ++k) cert.b1_powers.push_back(cert.b1_powers.back() * cert.b1);
    cert.b2_suffix.assign(static_cast<size_t>(r), KMatrix<K>(cert.d2, cert.d2));
    KMatrix<K> id2 = KMatrix<K>::identity(cert.d2);
    cert.b2_suffix[r - 1] = id2 * cert.cohn_q.coeff(static_cast<unsigned>(r));
    for (int k = r - 2; k >= 0; --k)
        cert.b2_suffix[k] =
            id2 * cert.cohn_q.coeff(static_cast<unsigned>(k + 1)) + cert.b2_suffix[k + 1] * cert.b2;
    return cert;
}

template <ScalarField K>
struct HenselSplit {
    SeriesMatrix<K> u;  // unitary, u(0) = I
    SeriesMatrix<K> b1; // d1 x d1 block, b1(0) = B1
    SeriesMatrix<K> b2;
};

namespace detail {

// (I - u/2)^{-1} (I + u/2) for skew-Hermitian u of positive order: exactly
// unitary modulo the cap.
template <ScalarField K>
SeriesMatrix<K> cayley(const SeriesMatrix<K>& u) {
    unsigned n = u.rows(), cap = u.cap();
    K half = K::one() / K::from_int(2);
    SeriesMatrix<K> uh = u * half;
    SeriesMatrix<K> id = SeriesMatrix<K>::identity(n, u.nvars(), cap);
    SeriesMatrix<K> inv = id;
    for (unsigned j = 0; j < cap; ++j) inv = id + uh * inv; // geometric series
    return inv * (id + uh);
}

} // namespace detail

// Order-by-order unitary splitting: lifts the block decomposition of A(0)
// to the whole family. At each homogeneous order the (1,2) block is
// cancelled by a Cayley factor built from one Sylvester solve; the (2,1)
// block of the same order then vanishes automatically (the conjugated
// matrix is normal and block triangular at that order, hence block
// diagonal), which is asserted.
template <ScalarField K>
HenselSplit<K> hensel_split(const SeriesMatrix<K>& a, const SplitCertificate<K>& cert) {
    unsigned n = a.rows(), d1 = cert.d1, d2 = cert.d2;
    if (n != a.cols() || n != d1 + d2) throw DimensionMismatch("hensel_split shapes");
    unsigned rel = a.reliable();

    SeriesMatrix<K> m = a;
    SeriesMatrix<K> u = SeriesMatrix<K>::identity(n, a.nvars(), a.cap());
    auto scale2 = a.max_abs2(a.cap());

    for (unsigned k = 1; k <= rel; ++k) {
        SeriesMatrix<K> c = m.block(0, d1, d1, d2).homogeneous_part(k);
        if (!c.is_zero_through(k)) {
            SkewCorrection<K> corr{k, detail::cohn_apply(cert, -c)};
            SeriesMatrix<K> w = detail::cayley(corr.skew());
            m = w.adjoint() * m * w;
            u = u * w;
        }
        SeriesMatrix<K> c21 = m.block(d1, 0, d2, d1).homogeneous_part(k);
        if (!is_zero_scaled(c21, scale2))
            throw NormalityViolation("(2,1) block did not vanish at order " + std::to_string(k));
        if (runtime::trace_enabled()) {
            std::cerr << "[hensel] order " << k << " off-diagonal max |.|^2 ~ "
                      << to_double(m.block(0, d1, d1, d2).max_abs2(rel)) << "\n";
        }
    }

    HenselSplit<K> out{u, m.block(0, 0, d1, d1), m.block(d1, d1, d2, d2)};
    return out;
}

} // namespace serimat
