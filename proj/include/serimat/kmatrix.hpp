#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "serimat/errors.hpp"
#include "serimat/poly.hpp"
#include "serimat/scalar.hpp"

namespace serimat {

// Dense constant matrix over the scalar field. Workhorse for the constant
// linear algebra behind the splitting step: inverses, nullspaces,
// characteristic polynomials, eigendecompositions of normal matrices.
template <ScalarField K>
class KMatrix {
public:
    KMatrix(unsigned rows, unsigned cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, K::zero()) {}

    static KMatrix identity(unsigned n) {
        KMatrix m(n, n);
        for (unsigned i = 0; i < n; ++i) m.at(i, i) = K::one();
        return m;
    }

    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    K& at(unsigned i, unsigned j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const K& at(unsigned i, unsigned j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    KMatrix operator+(const KMatrix& o) const {
        check_same_shape(o);
        KMatrix r(*this);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = r.a_[k] + o.a_[k];
        return r;
    }
    KMatrix operator-(const KMatrix& o) const {
        check_same_shape(o);
        KMatrix r(*this);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = r.a_[k] - o.a_[k];
        return r;
    }
    KMatrix operator*(const KMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("constant matrix product");
        KMatrix r(rows_, o.cols_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned k = 0; k < cols_; ++k) {
                const K& v = at(i, k);
                if (serimat::is_zero(v)) continue;
                for (unsigned j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + v * o.at(k, j);
            }
        return r;
    }
    KMatrix operator*(const K& v) const {
        KMatrix r(*this);
        for (auto& x : r.a_) x = x * v;
        return r;
    }
    KMatrix operator-() const {
        KMatrix r(*this);
        for (auto& x : r.a_) x = -x;
        return r;
    }

    KMatrix adjoint() const {
        KMatrix r(cols_, rows_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned j = 0; j < cols_; ++j) r.at(j, i) = conj(at(i, j));
        return r;
    }

    K trace() const {
        K t = K::zero();
        for (unsigned i = 0; i < std::min(rows_, cols_); ++i) t = t + at(i, i);
        return t;
    }

    bool is_zero() const {
        for (auto& x : a_)
            if (!serimat::is_zero(x)) return false;
        return true;
    }

    bool operator==(const KMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    // Gauss-Jordan inverse; throws on singular input.
    KMatrix inverse() const {
        if (rows_ != cols_) throw NotSquare("inverse");
        unsigned n = rows_;
        KMatrix w(*this);
        KMatrix inv = identity(n);
        for (unsigned c = 0; c < n; ++c) {
            unsigned piv = n;
            double best = 0;
            for (unsigned r = c; r < n; ++r) {
                if (serimat::is_zero(w.at(r, c))) continue;
                double mag = approx_abs(w.at(r, c));
                if (piv == n || mag > best) {
                    piv = r;
                    best = mag;
                }
            }
            if (piv == n) throw DivisionByZero("singular matrix");
            w.swap_rows(piv, c);
            inv.swap_rows(piv, c);
            K d = K::one() / w.at(c, c);
            w.scale_row(c, d);
            inv.scale_row(c, d);
            for (unsigned r = 0; r < n; ++r) {
                if (r == c || serimat::is_zero(w.at(r, c))) continue;
                K f = w.at(r, c);
                w.axpy_row(r, c, -f);
                inv.axpy_row(r, c, -f);
            }
        }
        return inv;
    }

    // Orthonormal-free nullspace basis (row reduction over the field; on the
    // float backend pivots below eps count as zero).
    std::vector<std::vector<K>> nullspace() const {
        KMatrix w(*this);
        unsigned n = cols_;
        std::vector<unsigned> pivot_col;
        unsigned row = 0;
        for (unsigned c = 0; c < n && row < rows_; ++c) {
            unsigned piv = rows_;
            double best = 0;
            for (unsigned r = row; r < rows_; ++r) {
                if (serimat::is_zero(w.at(r, c))) continue;
                double mag = approx_abs(w.at(r, c));
                if (piv == rows_ || mag > best) {
                    piv = r;
                    best = mag;
                }
            }
            if (piv == rows_) continue;
            w.swap_rows(piv, row);
            K d = K::one() / w.at(row, c);
            w.scale_row(row, d);
            for (unsigned r = 0; r < rows_; ++r) {
                if (r == row || serimat::is_zero(w.at(r, c))) continue;
                w.axpy_row(r, row, -w.at(r, c));
            }
            pivot_col.push_back(c);
            ++row;
        }
        std::vector<std::vector<K>> basis;
        std::vector<bool> is_pivot(n, false);
        for (unsigned c : pivot_col) is_pivot[c] = true;
        for (unsigned c = 0; c < n; ++c) {
            if (is_pivot[c]) continue;
            std::vector<K> v(n, K::zero());
            v[c] = K::one();
            for (unsigned r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -w.at(r, c);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Monic characteristic polynomial by the Faddeev-LeVerrier recurrence
    // (divisions by integers only).
    Poly<K> char_poly() const {
        if (rows_ != cols_) throw NotSquare("char_poly");
        unsigned d = rows_;
        std::vector<K> c(d + 1, K::zero());
        c[d] = K::one();
        KMatrix m = identity(d);
        for (unsigned k = 1; k <= d; ++k) {
            m = *this * m;
            K ck = -(m.trace() / K::from_int(static_cast<long>(k)));
            c[d - k] = ck;
            for (unsigned i = 0; i < d; ++i) m.at(i, i) = m.at(i, i) + ck;
        }
        return Poly<K>(std::move(c));
    }

    void swap_rows(unsigned i, unsigned j) {
        if (i == j) return;
        for (unsigned c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }
    void scale_row(unsigned i, const K& f) {
        for (unsigned c = 0; c < cols_; ++c) at(i, c) = at(i, c) * f;
    }
    void axpy_row(unsigned dst, unsigned src, const K& f) {
        for (unsigned c = 0; c < cols_; ++c) at(dst, c) = at(dst, c) + f * at(src, c);
    }

private:
    void check_same_shape(const KMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("constant matrix shape");
    }

    unsigned rows_, cols_;
    std::vector<K> a_;
};

// Evaluate a polynomial at a square matrix.
template <ScalarField K>
KMatrix<K> eval_at_matrix(const Poly<K>& p, const KMatrix<K>& m) {
    KMatrix<K> acc(m.rows(), m.cols());
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * m;
        K c = p.coeff(static_cast<unsigned>(i));
        for (unsigned k = 0; k < m.rows(); ++k) acc.at(k, k) = acc.at(k, k) + c;
    }
    return acc;
}

namespace detail {

template <ScalarField K>
K dot(const std::vector<K>& u, const std::vector<K>& v) {
    K s = K::zero();
    for (size_t i = 0; i < u.size(); ++i) s = s + conj(u[i]) * v[i];
    return s;
}

template <ScalarField K>
typename K::Real norm2(const std::vector<K>& v) {
    typename K::Real s(0);
    for (auto& x : v) s = s + x.abs2();
    return s;
}

} // namespace detail

// Gram-Schmidt with representable norms: at each step the pool of remaining
// vectors is orthogonal to everything accepted, and we pick (searching small
// field combinations if needed) a pool vector whose squared norm is |tau|^2
// for some field element tau; only then do we divide. Orthogonalization
// itself uses divisions by squared norms, which never leave the subfield the
// vectors started in. Vectors must be linearly independent.
template <ScalarField K>
std::vector<std::vector<K>> orthonormalize(std::vector<std::vector<K>> pool) {
    using Vec = std::vector<K>;
    auto is_degenerate = [](const typename K::Real& nn) {
        if constexpr (K::exact)
            return nn.is_zero();
        else
            return nn <= FloatScalar::context().eps;
    };
    std::vector<Vec> out;
    while (!pool.empty()) {
        // Pick a direction with a representable norm: a pool vector, or a
        // small combination pool[0] + c * pool[j]. Either way one pool slot
        // enters with a unit coefficient and can be retired afterwards.
        std::optional<Vec> chosen;
        std::optional<K> tau;
        size_t retire = 0;
        auto consider = [&](const Vec& w, size_t slot) {
            if (chosen) return;
            auto nn = detail::norm2(w);
            if (is_degenerate(nn)) return;
            if (auto t = K::norm_representative(nn)) {
                chosen = w;
                tau = *t;
                retire = slot;
            }
        };
        for (size_t j = 0; j < pool.size() && !chosen; ++j) consider(pool[j], j);
        if (!chosen && pool.size() > 1) {
            std::vector<K> mixers{K::one(),      -K::one(),          K::i(),
                                  -K::i(),       K::one() + K::i(),  K::one() - K::i(),
                                  K::from_int(2), -K::from_int(2)};
            for (size_t j = 1; j < pool.size() && !chosen; ++j)
                for (const K& c : mixers) {
                    Vec w = pool[0];
                    for (size_t t = 0; t < w.size(); ++t) w[t] = w[t] + c * pool[j][t];
                    consider(w, 0);
                    if (chosen) break;
                }
        }
        if (!chosen) throw SpectrumNotSplit("eigenvector norm is not a Q(i, sqrt 2) norm");
        auto nn = detail::norm2(*chosen);
        K inv = K::one() / *tau;
        Vec u = *chosen;
        for (auto& x : u) x = x * inv;
        // project the surviving slots against the chosen direction, dividing
        // by the squared norm so the pool stays in its subfield
        std::vector<Vec> next;
        for (size_t s = 0; s < pool.size(); ++s) {
            if (s == retire) continue;
            K c = detail::dot(*chosen, pool[s]);
            Vec w = pool[s];
            for (size_t t = 0; t < w.size(); ++t)
                w[t] = w[t] - div_real(chosen->at(t) * c, nn);
            if (is_degenerate(detail::norm2(w)))
                throw SpectrumNotSplit("dependent eigenvectors");
            next.push_back(std::move(w));
        }
        out.push_back(std::move(u));
        pool = std::move(next);
    }
    return out;
}

// Unitary eigendecomposition of a constant normal matrix.
template <ScalarField K>
struct EigenDecomposition {
    KMatrix<K> q;            // unitary, columns are eigenvectors
    std::vector<K> values;   // per column
};

// Hermitian Jacobi sweeps (float backend).
EigenDecomposition<FloatScalar> jacobi_hermitian(const KMatrix<FloatScalar>& h);

// Full decomposition of a normal constant matrix, per backend. Exact: root
// search over Q(i, sqrt 2) (throws SpectrumNotSplit when the field is too
// small). Float: Jacobi on the commuting Hermitian parts.
EigenDecomposition<ExactScalar> eigen_normal(const KMatrix<ExactScalar>& a);
EigenDecomposition<FloatScalar> eigen_normal(const KMatrix<FloatScalar>& a);

} // namespace serimat
