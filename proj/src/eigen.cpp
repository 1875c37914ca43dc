#include <algorithm>
#include <numeric>

#include "serimat/kmatrix.hpp"

namespace serimat {

namespace {

using FM = KMatrix<FloatScalar>;

mpf_class frobenius2(const FM& a) {
    mpf_class s(0);
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) s += a.at(i, j).abs2();
    return s;
}

mpf_class offdiag2(const FM& a) {
    mpf_class s(0);
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j)
            if (i != j) s += a.at(i, j).abs2();
    return s;
}

} // namespace

EigenDecomposition<FloatScalar> jacobi_hermitian(const FM& h) {
    unsigned n = h.rows();
    FM a = h;
    FM v = FM::identity(n);
    const mpf_class eps = FloatScalar::context().eps;
    mpf_class target = eps * eps * (1 + frobenius2(a));
    for (unsigned sweep = 0; sweep < 200 && offdiag2(a) > target; ++sweep) {
        for (unsigned p = 0; p < n; ++p)
            for (unsigned q = p + 1; q < n; ++q) {
                mpf_class b2 = a.at(p, q).abs2();
                if (b2 == 0) continue;
                mpf_class b = sqrt(b2);
                FloatScalar phase = div_real(a.at(p, q), b); // e^{i phi}
                mpf_class alpha = a.at(p, p).re(), gamma = a.at(q, q).re();
                mpf_class tau = (gamma - alpha) / (2 * b);
                mpf_class t;
                if (tau == 0)
                    t = 1;
                else {
                    mpf_class den = abs(tau) + sqrt(1 + tau * tau);
                    t = (tau >= 0 ? mpf_class(1) : mpf_class(-1)) / den;
                }
                mpf_class c = 1 / sqrt(1 + t * t);
                mpf_class s = t * c;
                // G = I except: G[p][p]=c, G[p][q]=s, G[q][p]=-s conj(phase),
                // G[q][q]=c conj(phase)
                FM g = FM::identity(n);
                g.at(p, p) = FloatScalar(c, 0);
                g.at(p, q) = FloatScalar(s, 0);
                g.at(q, p) = conj(phase) * FloatScalar(-s, 0);
                g.at(q, q) = conj(phase) * FloatScalar(c, 0);
                a = g.adjoint() * a * g;
                v = v * g;
            }
    }
    EigenDecomposition<FloatScalar> r{v, {}};
    for (unsigned i = 0; i < n; ++i) r.values.push_back(FloatScalar(a.at(i, i).re(), 0));
    return r;
}

EigenDecomposition<FloatScalar> eigen_normal(const FM& a0) {
    unsigned n = a0.rows();
    if (n != a0.cols()) throw NotSquare("eigen_normal");
    FloatScalar half = FloatScalar::one() / FloatScalar::from_int(2);
    FloatScalar half_i = half / FloatScalar::i();
    FM adj = a0.adjoint();
    FM h = (a0 + adj) * half;
    FM s = (a0 - adj) * half_i;

    auto eh = jacobi_hermitian(h);
    FM v = eh.q;

    // Cluster the Hermitian-part eigenvalues, then diagonalize the
    // skew-part restriction inside each cluster (it is Hermitian and the
    // restriction commutes with H there).
    std::vector<unsigned> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](unsigned x, unsigned y) { return eh.values[x].re() < eh.values[y].re(); });
    mpf_class scale = 1 + sqrt(frobenius2(a0));
    mpf_class gap = scale;
    {
        mpf_class e = FloatScalar::context().eps;
        gap = sqrt(e) * scale; // cluster band, well above roundoff
    }
    FM vp(n, n);
    for (unsigned j = 0; j < n; ++j)
        for (unsigned i = 0; i < n; ++i) vp.at(i, j) = v.at(i, idx[j]);
    v = vp;

    std::vector<mpf_class> hv;
    for (unsigned j = 0; j < n; ++j) hv.push_back(eh.values[idx[j]].re());

    unsigned start = 0;
    while (start < n) {
        unsigned end = start + 1;
        while (end < n && abs(hv[end] - hv[end - 1]) <= gap) ++end;
        if (end - start > 1) {
            unsigned m = end - start;
            FM vg(n, m);
            for (unsigned j = 0; j < m; ++j)
                for (unsigned i = 0; i < n; ++i) vg.at(i, j) = v.at(i, start + j);
            FM t = vg.adjoint() * s * vg;
            auto et = jacobi_hermitian(t);
            FM vg2 = vg * et.q;
            for (unsigned j = 0; j < m; ++j)
                for (unsigned i = 0; i < n; ++i) v.at(i, start + j) = vg2.at(i, j);
        }
        start = end;
    }

    FM d = v.adjoint() * a0 * v;
    mpf_class off = sqrt(offdiag2(d));
    if (off > sqrt(FloatScalar::context().eps) * scale)
        throw NormalityViolation("constant eigensolve left significant off-diagonal mass");
    EigenDecomposition<FloatScalar> r{v, {}};
    for (unsigned i = 0; i < n; ++i) r.values.push_back(d.at(i, i));
    return r;
}

EigenDecomposition<ExactScalar> eigen_normal(const KMatrix<ExactScalar>& a0) {
    unsigned n = a0.rows();
    if (n != a0.cols()) throw NotSquare("eigen_normal");
    auto roots = roots_in_field(a0.char_poly());
    if (!roots) throw SpectrumNotSplit("characteristic polynomial does not split over Q(i, sqrt 2)");

    KMatrix<ExactScalar> q(n, n);
    std::vector<ExactScalar> values;
    unsigned col = 0;
    for (auto& [lambda, mult] : *roots) {
        KMatrix<ExactScalar> shifted = a0;
        for (unsigned i = 0; i < n; ++i) shifted.at(i, i) = shifted.at(i, i) - lambda;
        auto basis = shifted.nullspace();
        if (basis.size() != mult)
            throw NotNormal("eigenspace dimension does not match multiplicity");
        auto ortho = orthonormalize(std::move(basis));
        for (auto& vec : ortho) {
            for (unsigned i = 0; i < n; ++i) q.at(i, col) = vec[i];
            values.push_back(lambda);
            ++col;
        }
    }
    if (col != n) throw NotNormal("eigenvectors do not span");

    // Exact verification: unitarity and diagonality.
    if (!(q.adjoint() * q == KMatrix<ExactScalar>::identity(n)))
        throw NotNormal("eigenbasis is not orthonormal");
    KMatrix<ExactScalar> d = q.adjoint() * a0 * q;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            if (i == j ? !(d.at(i, j) == values[i]) : !d.at(i, j).is_zero())
                throw NotNormal("conjugated matrix is not diagonal");
        }
    return {q, values};
}

} // namespace serimat
