#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "serimat/discriminants.hpp"
#include "serimat/hensel.hpp"

namespace serimat {

template <ScalarField K>
struct ShiftRecord {
    unsigned level;     // recursion depth
    unsigned block_dim; // size of the block handled at this level
    Series<K> shift;    // trace(A)/d subtracted at this level
    Exponent gamma;     // monomial content divided out
};

struct ResidualReport {
    double conjugation = 0.0; // max |coeff| of the conjugation residual
    double unitarity = 0.0;   // max |coeff| of UU* - I (resp. O^T O - I)
    bool exact_zero = false;  // exact backend: both residuals identically zero
    unsigned reliable = 0;    // residuals certified through this degree
};

template <ScalarField K>
struct DiagonalizationResult {
    SeriesMatrix<K> u;          // unitary modulo the cap
    std::vector<Series<K>> d;   // diagonal entries (eigenvalue series)
    std::vector<ShiftRecord<K>> ledger;
    ResidualReport residual;
};

struct DiagonalizeOptions {
    bool hypothesis_gate = false; // run hypothesis_check up front
};

namespace detail {

template <ScalarField K>
bool series_zero_scaled(const Series<K>& f, unsigned through, typename K::Real scale2) {
    if constexpr (K::exact) {
        (void)scale2;
        return f.truncated(through).is_zero();
    } else {
        mpf_class e = FloatScalar::context().eps;
        return f.max_abs2(through) <= e * (1 + scale2); // |coeff| <= 2^-64-ish * scale
    }
}

template <ScalarField K>
void diagonalize_rec(const SeriesMatrix<K>& a, unsigned level,
                     std::vector<ShiftRecord<K>>& ledger, SeriesMatrix<K>& u_out,
                     std::vector<Series<K>>& d_out) {
    unsigned d = a.rows(), nvars = a.nvars(), cap = a.cap();
    u_out = SeriesMatrix<K>::identity(d, nvars, cap);
    if (d == 1) {
        d_out = {a.at(0, 0)};
        return;
    }

    Series<K> t = a.trace() * (K::one() / K::from_int(static_cast<long>(d)));
    SeriesMatrix<K> ahat = a - SeriesMatrix<K>::identity(d, nvars, cap) * t;

    if (ahat.is_zero_mod_reliable()) {
        // scalar family: already diagonal
        ledger.push_back({level, d, t, Exponent(nvars)});
        d_out.clear();
        for (unsigned i = 0; i < d; ++i) d_out.push_back(a.at(i, i));
        return;
    }

    Exponent gamma = ahat.monomial_content();
    ledger.push_back({level, d, t, gamma});
    SeriesMatrix<K> b = ahat.divide_by_monomial(gamma);

    if (b.constant_term().is_zero())
        throw HypothesisViolated(
            "after trace shift and monomial division the constant part vanishes (level " +
            std::to_string(level) + ")");

    auto cert = constant_normal_split(b.constant_term());
    SeriesMatrix<K> q0 = SeriesMatrix<K>::from_constant(cert.q0, nvars, cap);
    SeriesMatrix<K> bc = q0.adjoint() * b * q0;
    auto hs = hensel_split(bc, cert);

    SeriesMatrix<K> u1(0, 0, nvars, cap), u2(0, 0, nvars, cap);
    std::vector<Series<K>> d1, d2;
    diagonalize_rec(hs.b1, level + 1, ledger, u1, d1);
    diagonalize_rec(hs.b2, level + 1, ledger, u2, d2);

    SeriesMatrix<K> ublock(d, d, nvars, cap);
    ublock.set_block(0, 0, u1);
    ublock.set_block(cert.d1, cert.d1, u2);
    u_out = q0 * hs.u * ublock;

    d_out.clear();
    for (auto& e : d1) d_out.push_back(e.multiply_by_monomial(gamma) + t);
    for (auto& e : d2) d_out.push_back(e.multiply_by_monomial(gamma) + t);
}

template <ScalarField K>
SeriesMatrix<K> diag_matrix(const std::vector<Series<K>>& d, unsigned nvars, unsigned cap) {
    SeriesMatrix<K> m(static_cast<unsigned>(d.size()), static_cast<unsigned>(d.size()), nvars,
                      cap);
    for (unsigned i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

template <ScalarField K>
double residual_magnitude(const SeriesMatrix<K>& r, unsigned through) {
    return std::sqrt(to_double(r.max_abs2(through)));
}

} // namespace detail

// Recursive diagonalization of a normal family: trace shift, monomial
// content division, constant split, Hensel lift, recurse on the blocks.
template <ScalarField K>
DiagonalizationResult<K> diagonalize_normal(const SeriesMatrix<K>& a,
                                            const DiagonalizeOptions& opts = {}) {
    if (a.rows() != a.cols()) throw NotSquare("diagonalize_normal");
    if (!is_normal(a)) throw NotNormal("diagonalize_normal");
    if (opts.hypothesis_gate) {
        auto rep = hypothesis_check(a);
        if (!rep.monomial_unit)
            throw HypothesisViolated("discriminant is not a monomial times a unit");
    }

    DiagonalizationResult<K> res{SeriesMatrix<K>(0, 0, a.nvars(), a.cap()), {}, {}, {}};
    detail::diagonalize_rec(a, 0, res.ledger, res.u, res.d);

    unsigned rel = std::min(a.reliable(), res.u.reliable());
    for (auto& e : res.d) rel = std::min(rel, e.reliable());
    SeriesMatrix<K> conj_res =
        res.u.adjoint() * a * res.u - detail::diag_matrix(res.d, a.nvars(), a.cap());
    SeriesMatrix<K> id = SeriesMatrix<K>::identity(a.rows(), a.nvars(), a.cap());
    SeriesMatrix<K> unit_res = res.u * res.u.adjoint() - id;

    res.residual.reliable = rel;
    res.residual.conjugation = detail::residual_magnitude(conj_res, rel);
    res.residual.unitarity = detail::residual_magnitude(unit_res, rel);
    if constexpr (K::exact)
        res.residual.exact_zero =
            conj_res.is_zero_through(rel) && unit_res.is_zero_through(rel);
    auto scale2 = a.max_abs2(a.cap());
    if (!is_zero_scaled(conj_res, scale2) || !is_zero_scaled(unit_res, scale2))
        throw NormalityViolation("diagonalization residual breached tolerance");
    return res;
}

// The exponents of the nonzero diagonal entries must form a chain under
// coordinatewise order. Throws NotMonomialUnit when an entry is not a
// monomial times a unit.
template <ScalarField K>
bool well_ordered_check(const std::vector<Series<K>>& diag) {
    std::vector<Exponent> exps;
    for (auto& s : diag) {
        if (s.is_zero_mod_reliable()) continue;
        auto g = s.is_monomial_times_unit();
        if (!g) throw NotMonomialUnit("diagonal entry is not a monomial times a unit");
        exps.push_back(*g);
    }
    std::sort(exps.begin(), exps.end(), [](const Exponent& x, const Exponent& y) {
        return GrlexLess{}(x, y);
    });
    for (size_t i = 1; i < exps.size(); ++i)
        if (!exps[i - 1].divides(exps[i])) return false;
    return true;
}

template <ScalarField K>
bool well_ordered_check(const DiagonalizationResult<K>& r) {
    return well_ordered_check(r.d);
}

// ---------------------------------------------------------------------------
// Real orthogonal normal form
// ---------------------------------------------------------------------------

template <ScalarField K>
struct RealBlock {
    Series<K> a, b; // the 2x2 rotation-type block [[a, b], [-b, a]]
};

template <ScalarField K>
struct RealNormalForm {
    SeriesMatrix<K> o;                 // real orthogonal modulo the cap
    unsigned s = 0;                    // number of 2x2 blocks
    std::vector<RealBlock<K>> blocks;  // s of them, leading
    std::vector<Series<K>> eigen_real; // the trailing d - 2s real eigenvalues
    ResidualReport residual;
};

template <ScalarField K>
SeriesMatrix<K> assemble_real_block_matrix(const RealNormalForm<K>& f, unsigned nvars,
                                           unsigned cap) {
    unsigned d = 2 * f.s + static_cast<unsigned>(f.eigen_real.size());
    SeriesMatrix<K> m(d, d, nvars, cap);
    for (unsigned k = 0; k < f.s; ++k) {
        m.at(2 * k, 2 * k) = f.blocks[k].a;
        m.at(2 * k, 2 * k + 1) = f.blocks[k].b;
        m.at(2 * k + 1, 2 * k) = -f.blocks[k].b;
        m.at(2 * k + 1, 2 * k + 1) = f.blocks[k].a;
    }
    for (unsigned i = 0; i < f.eigen_real.size(); ++i) m.at(2 * f.s + i, 2 * f.s + i) = f.eigen_real[i];
    return m;
}

namespace detail {

template <ScalarField K>
bool series_real_through(const Series<K>& f, unsigned through) {
    return imag_part(f).truncated(through).is_zero();
}

// Detect an input that is already in the target block layout (2x2
// rotation-type blocks and diagonal entries, in any order along the
// diagonal); returns the block positions when it matches.
template <ScalarField K>
std::optional<std::pair<std::vector<unsigned>, std::vector<unsigned>>> block_form_layout(
    const SeriesMatrix<K>& a, unsigned rel) {
    unsigned d = a.rows();
    std::vector<unsigned> pairs, singles;
    std::vector<bool> in_block(d, false);
    unsigned i = 0;
    while (i < d) {
        bool pair = false;
        if (i + 1 < d && !series_zero_scaled(a.at(i, i + 1), rel, a.max_abs2(a.cap()))) {
            // candidate block [[p, q], [-q, p]]
            if (equal_through_degree(a.at(i, i), a.at(i + 1, i + 1), rel) &&
                equal_through_degree(a.at(i + 1, i), -a.at(i, i + 1), rel))
                pair = true;
        }
        if (pair) {
            pairs.push_back(i);
            in_block[i] = in_block[i + 1] = true;
            i += 2;
        } else {
            singles.push_back(i);
            ++i;
        }
    }
    // everything outside the marked diagonal blocks must vanish
    auto scale2 = a.max_abs2(a.cap());
    for (unsigned r = 0; r < d; ++r)
        for (unsigned c = 0; c < d; ++c) {
            if (r == c) continue;
            bool inside = false;
            for (unsigned p : pairs)
                if (r >= p && r < p + 2 && c >= p && c < p + 2) inside = true;
            if (!inside && !series_zero_scaled(a.at(r, c), rel, scale2))
                return std::nullopt;
        }
    return std::make_pair(pairs, singles);
}

} // namespace detail

// Real orthogonal normal form of a real normal family: 2x2 rotation-type
// blocks for the complex-conjugate eigenvalue pairs, real eigenvalues on
// the tail. Symmetric inputs must come out with s = 0.
template <ScalarField K>
RealNormalForm<K> realify(const SeriesMatrix<K>& a) {
    if (a.rows() != a.cols()) throw NotSquare("realify");
    unsigned d = a.rows(), nvars = a.nvars(), cap = a.cap();
    unsigned rel = a.reliable();
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
            if (!detail::series_real_through(a.at(i, j), rel))
                throw NotNormal("realify requires real entries");
    if (!is_normal(a)) throw NotNormal("realify");

    RealNormalForm<K> out{SeriesMatrix<K>(d, d, nvars, cap), 0, {}, {}, {}};

    if (auto layout = detail::block_form_layout(a, rel)) {
        // already in form; at most a permutation is needed to lead with the
        // 2x2 blocks
        auto& [pairs, singles] = *layout;
        std::vector<unsigned> order;
        for (unsigned p : pairs) {
            order.push_back(p);
            order.push_back(p + 1);
        }
        for (unsigned s : singles) order.push_back(s);
        for (unsigned j = 0; j < d; ++j)
            out.o.at(order[j], j) = Series<K>::constant(nvars, cap, K::one());
        out.s = static_cast<unsigned>(pairs.size());
        for (unsigned p : pairs) out.blocks.push_back({a.at(p, p), a.at(p, p + 1)});
        for (unsigned s : singles) out.eigen_real.push_back(a.at(s, s));
    } else {
        auto r = diagonalize_normal(a);
        auto scale2 = a.max_abs2(a.cap());
        unsigned drel = rel;
        for (auto& e : r.d) drel = std::min(drel, e.reliable());

        std::vector<int> partner(d, -1);
        std::vector<bool> real_ev(d, false);
        for (unsigned i = 0; i < d; ++i)
            real_ev[i] = detail::series_zero_scaled(imag_part(r.d[i]), drel, scale2);
        for (unsigned i = 0; i < d; ++i) {
            if (real_ev[i] || partner[i] >= 0) continue;
            for (unsigned j = i + 1; j < d; ++j) {
                if (real_ev[j] || partner[j] >= 0) continue;
                if (detail::series_zero_scaled(r.d[i] - conj(r.d[j]), drel, scale2)) {
                    partner[i] = static_cast<int>(j);
                    partner[j] = static_cast<int>(i);
                    break;
                }
            }
            if (partner[i] < 0)
                throw PairingFailure("no conjugate partner for a non-real eigenvalue");
        }

        auto column = [&](unsigned j) {
            std::vector<Series<K>> v;
            for (unsigned i = 0; i < d; ++i) v.push_back(r.u.at(i, j));
            return v;
        };
        K inv_sqrt2 = K::sqrt2() / K::from_int(2);

        std::vector<std::vector<Series<K>>> cols;
        for (unsigned i = 0; i < d; ++i) {
            if (real_ev[i] || partner[i] < static_cast<int>(i)) continue;
            unsigned primary = i;
            Series<K> b = -imag_part(r.d[primary]);
            if (leading_negative(b)) primary = static_cast<unsigned>(partner[i]);
            auto v = column(primary);
            std::vector<Series<K>> u1, u2;
            for (unsigned t = 0; t < d; ++t) {
                Series<K> vc = conj(v[t]);
                u1.push_back((v[t] + vc) * inv_sqrt2);
                u2.push_back((v[t] - vc) * (K::i() * inv_sqrt2));
            }
            cols.push_back(std::move(u1));
            cols.push_back(std::move(u2));
            out.blocks.push_back(
                {real_part(r.d[primary]), -imag_part(r.d[primary])});
            ++out.s;
        }
        for (unsigned i = 0; i < d; ++i) {
            if (!real_ev[i]) continue;
            auto v = column(i);
            bool already_real = true;
            for (auto& e : v)
                if (!detail::series_real_through(e, drel)) already_real = false;
            if (!already_real) {
                // v = c * w with w real and |c| = 1; recover c^2 from the
                // bilinear square v^T v and divide the phase out
                Series<K> c2(nvars, cap);
                for (auto& e : v) c2 += e * e;
                if (is_zero(c2.constant_term()))
                    throw PairingFailure("isotropic eigenvector for a real eigenvalue");
                Series<K> cinv = c2.sqrt_unit().invert_unit();
                for (auto& e : v) e = e * cinv;
                for (auto& e : v)
                    if (!detail::series_real_through(e, drel))
                        throw PairingFailure("eigenvector cannot be made real");
            }
            for (auto& e : v) e = real_part(e);
            cols.push_back(std::move(v));
            out.eigen_real.push_back(real_part(r.d[i]));
        }

        for (unsigned j = 0; j < d; ++j)
            for (unsigned i = 0; i < d; ++i) out.o.at(i, j) = cols[j][i];
    }

    // A symmetric family realifies with s = 0.
    bool symmetric = true;
    for (unsigned i = 0; i < d && symmetric; ++i)
        for (unsigned j = 0; j < d; ++j)
            if (!equal_through_degree(a.at(i, j), a.at(j, i), rel)) {
                symmetric = false;
                break;
            }
    if (symmetric && out.s > 0)
        throw PairingFailure("symmetric family produced 2x2 blocks");

    SeriesMatrix<K> assembled = assemble_real_block_matrix(out, nvars, cap);
    SeriesMatrix<K> conj_res = out.o.transpose() * a * out.o - assembled;
    SeriesMatrix<K> unit_res =
        out.o.transpose() * out.o - SeriesMatrix<K>::identity(d, nvars, cap);
    unsigned rrel = std::min(rel, out.o.reliable());
    out.residual.reliable = rrel;
    out.residual.conjugation = detail::residual_magnitude(conj_res, rrel);
    out.residual.unitarity = detail::residual_magnitude(unit_res, rrel);
    if constexpr (K::exact)
        out.residual.exact_zero =
            conj_res.is_zero_through(rrel) && unit_res.is_zero_through(rrel);
    auto scale2 = a.max_abs2(a.cap());
    if (!is_zero_scaled(conj_res, scale2) || !is_zero_scaled(unit_res, scale2))
        throw NormalityViolation("real normal form residual breached tolerance");
    return out;
}

} // namespace serimat
