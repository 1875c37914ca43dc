#pragma once

#include <future>
#include <vector>

#include "serimat/kmatrix.hpp"
#include "serimat/runtime.hpp"
#include "serimat/series.hpp"

namespace serimat {

// Rectangular matrix of truncated series sharing one (nvars, cap).
template <ScalarField K>
class SeriesMatrix {
public:
    SeriesMatrix() : SeriesMatrix(0, 0, 0, 0) {}
    SeriesMatrix(unsigned rows, unsigned cols, unsigned nvars, unsigned cap)
        : rows_(rows),
          cols_(cols),
          nvars_(nvars),
          cap_(cap),
          e_(static_cast<size_t>(rows) * cols, Series<K>(nvars, cap)) {}

    static SeriesMatrix identity(unsigned n, unsigned nvars, unsigned cap) {
        SeriesMatrix m(n, n, nvars, cap);
        for (unsigned i = 0; i < n; ++i)
            m.at(i, i) = Series<K>::constant(nvars, cap, K::one());
        return m;
    }
    static SeriesMatrix from_constant(const KMatrix<K>& c, unsigned nvars, unsigned cap) {
        SeriesMatrix m(c.rows(), c.cols(), nvars, cap);
        for (unsigned i = 0; i < c.rows(); ++i)
            for (unsigned j = 0; j < c.cols(); ++j)
                m.at(i, j) = Series<K>::constant(nvars, cap, c.at(i, j));
        return m;
    }

    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    unsigned nvars() const { return nvars_; }
    unsigned cap() const { return cap_; }

    Series<K>& at(unsigned i, unsigned j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Series<K>& at(unsigned i, unsigned j) const {
        return e_[static_cast<size_t>(i) * cols_ + j];
    }

    unsigned reliable() const {
        unsigned r = cap_;
        for (auto& s : e_) r = std::min(r, s.reliable());
        return r;
    }

    SeriesMatrix operator+(const SeriesMatrix& o) const {
        check_same_shape(o);
        SeriesMatrix r(*this);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
        return r;
    }
    SeriesMatrix operator-(const SeriesMatrix& o) const {
        check_same_shape(o);
        SeriesMatrix r(*this);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
        return r;
    }
    SeriesMatrix operator-() const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = -s;
        return r;
    }

    SeriesMatrix operator*(const SeriesMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("series matrix product");
        if (nvars_ != o.nvars_ || cap_ != o.cap_)
            throw DimensionMismatch("series matrix (nvars, cap) mismatch");
        SeriesMatrix r(rows_, o.cols_, nvars_, cap_);
        auto cell = [&](unsigned i, unsigned j) {
            Series<K> acc(nvars_, cap_);
            for (unsigned k = 0; k < cols_; ++k) acc += at(i, k) * o.at(k, j);
            return acc;
        };
        unsigned threads = runtime::thread_count();
        size_t cells = static_cast<size_t>(rows_) * o.cols_;
        if (threads > 1 && cells >= 2 * threads) {
            // Output cells are independent; each is summed in a fixed order,
            // so the result does not depend on the partitioning.
            std::vector<std::future<void>> fs;
            size_t chunk = (cells + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                size_t lo = t * chunk, hi = std::min(cells, lo + chunk);
                if (lo >= hi) break;
                fs.push_back(std::async(std::launch::async, [&, lo, hi] {
                    for (size_t c = lo; c < hi; ++c)
                        r.e_[c] = cell(static_cast<unsigned>(c / o.cols_),
                                       static_cast<unsigned>(c % o.cols_));
                }));
            }
            for (auto& f : fs) f.get();
        } else {
            for (unsigned i = 0; i < rows_; ++i)
                for (unsigned j = 0; j < o.cols_; ++j) r.at(i, j) = cell(i, j);
        }
        return r;
    }

    SeriesMatrix operator*(const Series<K>& f) const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = s * f;
        return r;
    }
    SeriesMatrix operator*(const K& c) const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = s * c;
        return r;
    }

    // Adjoint: transpose with coefficientwise conjugation of every entry.
    SeriesMatrix adjoint() const {
        SeriesMatrix r(cols_, rows_, nvars_, cap_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned j = 0; j < cols_; ++j) r.at(j, i) = conj(at(i, j));
        return r;
    }
    // Plain transpose (no conjugation); used by the bilinear form v^T v.
    SeriesMatrix transpose() const {
        SeriesMatrix r(cols_, rows_, nvars_, cap_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Series<K> trace() const {
        Series<K> t(nvars_, cap_);
        for (unsigned i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
        return t;
    }

    KMatrix<K> constant_term() const {
        KMatrix<K> c(rows_, cols_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned j = 0; j < cols_; ++j) c.at(i, j) = at(i, j).constant_term();
        return c;
    }

    SeriesMatrix block(unsigned i0, unsigned j0, unsigned r, unsigned c) const {
        SeriesMatrix b(r, c, nvars_, cap_);
        for (unsigned i = 0; i < r; ++i)
            for (unsigned j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
        return b;
    }
    void set_block(unsigned i0, unsigned j0, const SeriesMatrix& b) {
        for (unsigned i = 0; i < b.rows_; ++i)
            for (unsigned j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
    }

    SeriesMatrix homogeneous_part(unsigned k) const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = s.homogeneous_part(k);
        return r;
    }

    bool is_zero_through(unsigned degree) const {
        for (auto& s : e_)
            if (!s.truncated(degree).is_zero()) return false;
        return true;
    }
    bool is_zero_mod_reliable() const { return is_zero_through(reliable()); }

    typename K::Real max_abs2(unsigned through) const {
        typename K::Real m(0);
        for (auto& s : e_) {
            auto v = s.max_abs2(through);
            if (m < v) m = v;
        }
        return m;
    }

    // Coordinatewise-minimal exponent over all entries' supports; requires a
    // nonzero matrix.
    Exponent monomial_content() const {
        std::optional<Exponent> g;
        for (auto& s : e_) {
            if (s.is_zero()) continue;
            Exponent c = s.monomial_content();
            g = g ? Exponent::cw_min(*g, c) : c;
        }
        if (!g) throw ZeroSeries("matrix monomial content");
        return *g;
    }

    SeriesMatrix divide_by_monomial(const Exponent& g) const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = s.divide_by_monomial(g);
        return r;
    }
    SeriesMatrix multiply_by_monomial(const Exponent& g) const {
        SeriesMatrix r(*this);
        for (auto& s : r.e_) s = s.multiply_by_monomial(g);
        return r;
    }

    friend SeriesMatrix conj(const SeriesMatrix& m) {
        SeriesMatrix r(m);
        for (auto& s : r.e_) s = conj(s);
        return r;
    }

private:
    void check_same_shape(const SeriesMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || nvars_ != o.nvars_ || cap_ != o.cap_)
            throw DimensionMismatch("series matrix shape");
    }

    unsigned rows_, cols_, nvars_, cap_;
    std::vector<Series<K>> e_;
};

// Zero test modulo the reliable degree with the float tolerance scaled by the
// magnitude of `scale_ref` (exact backend: literal zero).
template <ScalarField K>
bool is_zero_scaled(const SeriesMatrix<K>& m, typename K::Real scale2) {
    unsigned r = m.reliable();
    if constexpr (K::exact) {
        (void)scale2;
        return m.is_zero_through(r);
    } else {
        mpf_class e = FloatScalar::context().eps;
        mpf_class bound = e * e * (1 + scale2);
        return m.max_abs2(r) <= bound;
    }
}

// AA* = A*A modulo the reliable degree.
template <ScalarField K>
bool is_normal(const SeriesMatrix<K>& a) {
    if (a.rows() != a.cols()) throw NotSquare("is_normal");
    SeriesMatrix<K> adj = a.adjoint();
    SeriesMatrix<K> lhs = a * adj, rhs = adj * a;
    auto scale2 = lhs.max_abs2(lhs.reliable());
    auto s2 = rhs.max_abs2(rhs.reliable());
    if (scale2 < s2) scale2 = s2;
    return is_zero_scaled(lhs - rhs, scale2);
}

// UU* = U*U = I modulo the reliable degree.
template <ScalarField K>
bool is_unitary(const SeriesMatrix<K>& u) {
    if (u.rows() != u.cols()) throw NotSquare("is_unitary");
    SeriesMatrix<K> adj = u.adjoint();
    SeriesMatrix<K> id = SeriesMatrix<K>::identity(u.rows(), u.nvars(), u.cap());
    auto scale2 = u.max_abs2(u.cap());
    return is_zero_scaled(u * adj - id, scale2) && is_zero_scaled(adj * u - id, scale2);
}

// Monic characteristic polynomial P(Z) = Z^d + c_1 Z^{d-1} + ... + c_d over
// the series ring; c_1 = -trace(A).
template <ScalarField K>
struct CharPoly {
    unsigned dim;
    std::vector<Series<K>> c; // c[i] is c_{i+1}

    const Series<K>& coeff(unsigned i) const { return c.at(i - 1); } // 1-based

    // Index of the last nonzero coefficient (mod reliable); 0 when every c_i
    // vanishes (then the "last nonzero coefficient" is the leading 1).
    unsigned last_nonzero_index() const {
        for (unsigned i = dim; i >= 1; --i)
            if (!c[i - 1].is_zero_mod_reliable()) return i;
        return 0;
    }
};

template <ScalarField K>
CharPoly<K> char_poly(const SeriesMatrix<K>& a) {
    if (a.rows() != a.cols()) throw NotSquare("char_poly");
    unsigned d = a.rows();
    CharPoly<K> p{d, {}};
    p.c.assign(d, Series<K>(a.nvars(), a.cap()));
    SeriesMatrix<K> m = SeriesMatrix<K>::identity(d, a.nvars(), a.cap());
    for (unsigned k = 1; k <= d; ++k) {
        m = a * m;
        Series<K> ck = -(m.trace() * (K::one() / K::from_int(static_cast<long>(k))));
        p.c[k - 1] = ck;
        for (unsigned i = 0; i < d; ++i) m.at(i, i) += ck;
    }
    return p;
}

// p_0 = d, p_k = trace(A^k) for k = 1..kmax.
template <ScalarField K>
std::vector<Series<K>> power_sums(const SeriesMatrix<K>& a, unsigned kmax) {
    if (a.rows() != a.cols()) throw NotSquare("power_sums");
    std::vector<Series<K>> p;
    p.push_back(Series<K>::constant(a.nvars(), a.cap(), K::from_int(static_cast<long>(a.rows()))));
    SeriesMatrix<K> m = a;
    for (unsigned k = 1; k <= kmax; ++k) {
        if (k > 1) m = m * a;
        p.push_back(m.trace());
    }
    return p;
}

} // namespace serimat
