#pragma once

#include <algorithm>
#include <vector>

#include "serimat/diagonalize.hpp"

namespace serimat {

enum class SVDMode { complex_diagonal, real_block, real_diagonal_refined };

template <ScalarField K>
struct SVDResult {
    SeriesMatrix<K> v;    // m x m, unitary (orthogonal in real mode)
    SeriesMatrix<K> u;    // d x d
    SeriesMatrix<K> diag; // m x d, rectangular diagonal (block form in real mode)
    SVDMode mode = SVDMode::complex_diagonal;
    ResidualReport residual;
    bool transposed = false; // input had m > d and was handled as its adjoint
};

namespace detail {

// Canonical deterministic order of eigenvalue series (graded-lex leading
// exponent, then term data).
template <ScalarField K>
bool eigen_order(const Series<K>& x, const Series<K>& y) {
    return series_less(x, y);
}

template <ScalarField K>
void svd_residual(const SeriesMatrix<K>& a, SVDResult<K>& r) {
    unsigned rel = std::min({a.reliable(), r.v.reliable(), r.u.reliable(), r.diag.reliable()});
    SeriesMatrix<K> conj_res = r.v.adjoint() * a * r.u - r.diag;
    SeriesMatrix<K> idm = SeriesMatrix<K>::identity(r.v.rows(), a.nvars(), a.cap());
    SeriesMatrix<K> idd = SeriesMatrix<K>::identity(r.u.rows(), a.nvars(), a.cap());
    SeriesMatrix<K> vres = r.v.adjoint() * r.v - idm;
    SeriesMatrix<K> ures = r.u.adjoint() * r.u - idd;
    r.residual.reliable = rel;
    r.residual.conjugation = residual_magnitude(conj_res, rel);
    r.residual.unitarity =
        std::max(residual_magnitude(vres, rel), residual_magnitude(ures, rel));
    if constexpr (K::exact)
        r.residual.exact_zero = conj_res.is_zero_through(rel) && vres.is_zero_through(rel) &&
                                ures.is_zero_through(rel);
    auto scale2 = a.max_abs2(a.cap());
    if (!is_zero_scaled(conj_res, scale2) || !is_zero_scaled(vres, scale2) ||
        !is_zero_scaled(ures, scale2))
        throw NormalityViolation("SVD residual breached tolerance");
}

} // namespace detail

struct SVDOptions {
    bool real = false; // real input: route through the orthogonal normal form
};

// Singular value decomposition of a rectangular family, following the
// correspondence between the spectra of A*A and AA*: diagonalize both,
// permute equal eigenvalue series into contiguous blocks, and diagonalize
// each square block A_lambda (which is normal: A_lambda* A_lambda = lambda I).
template <ScalarField K>
SVDResult<K> svd_series(const SeriesMatrix<K>& a, const SVDOptions& opts = {}) {
    unsigned m = a.rows(), d = a.cols(), nvars = a.nvars(), cap = a.cap();
    if (m > d) {
        SVDResult<K> t = svd_series(a.adjoint(), opts);
        SVDResult<K> r{t.u, t.v, t.diag.adjoint(), t.mode, {}, true};
        detail::svd_residual(a, r);
        return r;
    }

    SVDResult<K> res{SeriesMatrix<K>::identity(m, nvars, cap),
                     SeriesMatrix<K>::identity(d, nvars, cap),
                     SeriesMatrix<K>(m, d, nvars, cap),
                     opts.real ? SVDMode::real_block : SVDMode::complex_diagonal,
                     {},
                     false};

    if (a.is_zero_mod_reliable()) {
        detail::svd_residual(a, res);
        return res;
    }

    SeriesMatrix<K> asa = a.adjoint() * a; // d x d
    SeriesMatrix<K> aas = a * a.adjoint(); // m x m

    auto rep = hypothesis_check(asa);
    if (!rep.monomial_unit)
        throw HypothesisViolated("discriminant of A*A is not a monomial times a unit");

    std::vector<Series<K>> d1, d2;
    SeriesMatrix<K> u1(0, 0, nvars, cap), u2(0, 0, nvars, cap);
    if (opts.real) {
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = 0; j < d; ++j)
                if (!detail::series_real_through(a.at(i, j), a.reliable()))
                    throw NotNormal("real-mode SVD requires real entries");
        // A*A and AA* are symmetric, so their real forms are diagonal (s = 0)
        auto f1 = realify(asa);
        auto f2 = realify(aas);
        u1 = f1.o;
        u2 = f2.o;
        d1 = f1.eigen_real;
        d2 = f2.eigen_real;
    } else {
        auto r1 = diagonalize_normal(asa);
        auto r2 = diagonalize_normal(aas);
        u1 = r1.u;
        u2 = r2.u;
        d1 = r1.d;
        d2 = r2.d;
    }

    SeriesMatrix<K> ahat = u2.adjoint() * a * u1; // m x d, block rectangular diagonal

    // Group equal eigenvalue series; nonzero ones must appear in both lists
    // with equal multiplicities.
    unsigned rel = std::min(ahat.reliable(), std::min(asa.reliable(), aas.reliable()));
    auto scale2 = asa.max_abs2(asa.cap());
    auto is_zero_ev = [&](const Series<K>& s) {
        return detail::series_zero_scaled(s, rel, scale2);
    };
    auto same_ev = [&](const Series<K>& x, const Series<K>& y) {
        return detail::series_zero_scaled(x - y, rel, scale2);
    };

    std::vector<Series<K>> distinct;
    for (auto& s : d1) {
        if (is_zero_ev(s)) continue;
        bool found = false;
        for (auto& t : distinct)
            if (same_ev(s, t)) {
                found = true;
                break;
            }
        if (!found) distinct.push_back(s);
    }
    std::sort(distinct.begin(), distinct.end(),
              [](const Series<K>& x, const Series<K>& y) { return detail::eigen_order(x, y); });

    std::vector<unsigned> perm1, perm2; // new position -> old index
    for (auto& lam : distinct) {
        std::vector<unsigned> g1, g2;
        for (unsigned j = 0; j < d; ++j)
            if (!is_zero_ev(d1[j]) && same_ev(d1[j], lam)) g1.push_back(j);
        for (unsigned i = 0; i < m; ++i)
            if (!is_zero_ev(d2[i]) && same_ev(d2[i], lam)) g2.push_back(i);
        if (g1.size() != g2.size())
            throw NormalityViolation("eigenvalue multiplicities of A*A and AA* disagree");
        perm1.insert(perm1.end(), g1.begin(), g1.end());
        perm2.insert(perm2.end(), g2.begin(), g2.end());
    }
    for (unsigned j = 0; j < d; ++j)
        if (is_zero_ev(d1[j])) perm1.push_back(j);
    for (unsigned i = 0; i < m; ++i)
        if (is_zero_ev(d2[i])) perm2.push_back(i);

    SeriesMatrix<K> p1(d, d, nvars, cap), p2(m, m, nvars, cap);
    for (unsigned j = 0; j < d; ++j)
        p1.at(perm1[j], j) = Series<K>::constant(nvars, cap, K::one());
    for (unsigned i = 0; i < m; ++i)
        p2.at(perm2[i], i) = Series<K>::constant(nvars, cap, K::one());
    SeriesMatrix<K> aperm = p2.adjoint() * ahat * p1;

    // Per-eigenvalue square blocks, each normal with A_lam* A_lam = lam I.
    SeriesMatrix<K> vblk = SeriesMatrix<K>::identity(m, nvars, cap);
    SeriesMatrix<K> ublk = SeriesMatrix<K>::identity(d, nvars, cap);
    SeriesMatrix<K> dout(m, d, nvars, cap);
    unsigned pos = 0;
    for (auto& lam : distinct) {
        unsigned mult = 0;
        for (unsigned j = 0; j < d; ++j)
            if (!is_zero_ev(d1[j]) && same_ev(d1[j], lam)) ++mult;
        SeriesMatrix<K> alam = aperm.block(pos, pos, mult, mult);
        SeriesMatrix<K> check = alam.adjoint() * alam;
        for (unsigned i = 0; i < mult; ++i) check.at(i, i) -= lam;
        if (!is_zero_scaled(check, scale2))
            throw NormalityViolation("per-eigenvalue block is not isometric to lambda I");
        if (opts.real) {
            RealNormalForm<K> f;
            try {
                f = realify(alam);
            } catch (const HypothesisViolated& e) {
                throw BlockHypothesisViolated(e.what());
            }
            SeriesMatrix<K> blk = assemble_real_block_matrix(f, nvars, cap);
                vblk.set_block(pos, pos, f.o);
            ublk.set_block(pos, pos, f.o);
            dout.set_block(pos, pos, blk);
        } else {
            DiagonalizationResult<K> f;
            try {
                f = diagonalize_normal(alam);
            } catch (const HypothesisViolated& e) {
                throw BlockHypothesisViolated(e.what());
            }
            vblk.set_block(pos, pos, f.u);
            ublk.set_block(pos, pos, f.u);
            for (unsigned i = 0; i < mult; ++i) dout.at(pos + i, pos + i) = f.d[i];
        }
        pos += mult;
    }

    res.v = u2 * p2 * vblk;
    res.u = u1 * p1 * ublk;
    res.diag = dout;
    detail::svd_residual(a, res);
    return res;
}

// Normalizes the diagonal to real entries with positive leading
// coefficients, under the refined hypothesis on the last nonzero coefficient
// of P_{A*A}: each entry a = X^gamma (a1~ + i a2~) is rotated by the unit
// u = (a1~ - i a2~)/sqrt(a1~^2 + a2~^2), making it X^gamma sqrt(a1~^2+a2~^2);
// 2x2 real blocks are rotated by the analogous orthogonal factor. The
// resulting exponents must be well ordered.
template <ScalarField K>
SVDResult<K> svd_monomial_refine(const SeriesMatrix<K>& a, SVDResult<K> res) {
    unsigned nvars = a.nvars(), cap = a.cap();
    const SeriesMatrix<K>& orig = a;
    SeriesMatrix<K> work_a = res.transposed ? a.adjoint() : a;
    SeriesMatrix<K> asa = work_a.adjoint() * work_a;
    auto rep = hypothesis_check(asa);
    if (!rep.last_coeff_monomial_unit)
        throw RefinementHypothesisViolated(
            "last nonzero coefficient of P_{A*A} is not a monomial times a unit");

    // Operate on the (m <= d) orientation; undo the transposition at the end.
    SeriesMatrix<K>& u = res.transposed ? res.v : res.u;
    SeriesMatrix<K> diag = res.transposed ? res.diag.adjoint() : res.diag;
    unsigned m = diag.rows();

    auto scale_u_col = [&](unsigned j, const Series<K>& f) {
        for (unsigned i = 0; i < u.rows(); ++i) u.at(i, j) = u.at(i, j) * f;
    };

    if (res.mode == SVDMode::complex_diagonal) {
        for (unsigned i = 0; i < m; ++i) {
            Series<K>& entry = diag.at(i, i);
            if (entry.is_zero_mod_reliable()) continue;
            Series<K> a1 = real_part(entry), a2 = imag_part(entry);
            if (a2.is_zero()) {
                if (leading_negative(a1)) {
                    scale_u_col(i, Series<K>::constant(nvars, cap, -K::one()));
                    entry = -entry;
                }
                continue;
            }
            Series<K> norm2 = a1 * a1 + a2 * a2;
            auto beta = norm2.is_monomial_times_unit();
            if (!beta)
                throw RefinementHypothesisViolated("|entry|^2 is not a monomial times a unit");
            Exponent gamma(nvars);
            for (unsigned t = 0; t < nvars; ++t) {
                if ((*beta)[t] % 2 != 0)
                    throw RefinementHypothesisViolated("odd exponent in |entry|^2");
                gamma[t] = (*beta)[t] / 2;
            }
            Series<K> a1t, a2t;
            try {
                a1t = a1.divide_by_monomial(gamma);
                a2t = a2.divide_by_monomial(gamma);
            } catch (const NotDivisible&) {
                throw RefinementHypothesisViolated("the ideal (a1, a2) is not monomial");
            }
            Series<K> sigma = a1t * a1t + a2t * a2t; // unit
            Series<K> root = sigma.sqrt_unit();      // may throw NotASquareInField (exact)
            Series<K> unit = (a1t - a2t * K::i()) * root.invert_unit();
            entry = entry * unit;
            scale_u_col(i, unit);
        }
        res.mode = SVDMode::real_diagonal_refined;
    } else if (res.mode == SVDMode::real_block) {
        unsigned i = 0;
        while (i < m) {
            bool block = i + 1 < m && !diag.at(i, i + 1).is_zero_mod_reliable();
            if (!block) {
                Series<K>& entry = diag.at(i, i);
                if (!entry.is_zero_mod_reliable() && leading_negative(entry)) {
                    scale_u_col(i, Series<K>::constant(nvars, cap, -K::one()));
                    entry = -entry;
                }
                ++i;
                continue;
            }
            Series<K> av = diag.at(i, i), bv = diag.at(i, i + 1);
            Series<K> norm2 = av * av + bv * bv;
            auto beta = norm2.is_monomial_times_unit();
            if (!beta)
                throw RefinementHypothesisViolated("a^2 + b^2 is not a monomial times a unit");
            Exponent gamma(nvars);
            for (unsigned t = 0; t < nvars; ++t) {
                if ((*beta)[t] % 2 != 0)
                    throw RefinementHypothesisViolated("odd exponent in a^2 + b^2");
                gamma[t] = (*beta)[t] / 2;
            }
            Series<K> a0, b0;
            try {
                a0 = av.divide_by_monomial(gamma);
                b0 = bv.divide_by_monomial(gamma);
            } catch (const NotDivisible&) {
                throw RefinementHypothesisViolated("the ideal (a, b) is not monomial");
            }
            Series<K> sigma = a0 * a0 + b0 * b0;
            Series<K> root = sigma.sqrt_unit();
            Series<K> rinv = root.invert_unit();
            // rotation [[a0, -b0], [b0, a0]] / sqrt(a0^2 + b0^2) applied to
            // the two u-columns
            std::vector<Series<K>> ci(u.rows()), cj(u.rows());
            for (unsigned t = 0; t < u.rows(); ++t) {
                ci[t] = (u.at(t, i) * a0 + u.at(t, i + 1) * b0) * rinv;
                cj[t] = (u.at(t, i) * (-b0) + u.at(t, i + 1) * a0) * rinv;
            }
            for (unsigned t = 0; t < u.rows(); ++t) {
                u.at(t, i) = ci[t];
                u.at(t, i + 1) = cj[t];
            }
            Series<K> val = root.multiply_by_monomial(gamma);
            diag.at(i, i) = val;
            diag.at(i + 1, i + 1) = val;
            diag.at(i, i + 1) = Series<K>(nvars, cap);
            diag.at(i + 1, i) = Series<K>(nvars, cap);
            i += 2;
        }
        res.mode = SVDMode::real_diagonal_refined;
    }

    res.diag = res.transposed ? diag.adjoint() : diag;
    detail::svd_residual(orig, res);

    std::vector<Series<K>> entries;
    for (unsigned i = 0; i < std::min(res.diag.rows(), res.diag.cols()); ++i)
        entries.push_back(res.diag.at(i, i));
    if (!well_ordered_check(entries))
        throw RefinementHypothesisViolated("refined exponents are not well ordered");
    return res;
}

} // namespace serimat
