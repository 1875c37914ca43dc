#pragma once

#include <optional>
#include <vector>

#include "serimat/series_matrix.hpp"

namespace serimat {

// Determinant of a small square grid of series by Laplace expansion.
template <ScalarField K>
Series<K> series_det(const std::vector<std::vector<Series<K>>>& m) {
    unsigned n = static_cast<unsigned>(m.size());
    if (n == 0) throw DimensionMismatch("empty determinant");
    unsigned nvars = m[0][0].nvars(), cap = m[0][0].cap();
    if (n == 1) return m[0][0];
    Series<K> acc(nvars, cap);
    for (unsigned i = 0; i < n; ++i) {
        if (m[i][0].is_zero()) continue;
        std::vector<std::vector<Series<K>>> minor;
        minor.reserve(n - 1);
        for (unsigned r = 0; r < n; ++r) {
            if (r == i) continue;
            minor.emplace_back(m[r].begin() + 1, m[r].end());
        }
        Series<K> term = m[i][0] * series_det(minor);
        acc += (i % 2 == 0) ? term : -term;
    }
    return acc;
}

// Generalized discriminants Delta_1..Delta_d of a degree-d monic polynomial,
// from the power sums p_0..p_{2d-2} of its roots: Delta_l is the determinant
// of the l x l Hankel matrix (p_{i+j}). By Cauchy-Binet on the Vandermonde
// factorization this equals the sum over l-subsets of the roots of the
// product of squared differences; Delta_1 = d always.
template <ScalarField K>
std::vector<Series<K>> generalized_discriminants(const std::vector<Series<K>>& p, unsigned d) {
    if (p.size() < 2 * d - 1) throw InsufficientPowerSums("need p_0..p_{2d-2}");
    std::vector<Series<K>> out;
    for (unsigned l = 1; l <= d; ++l) {
        std::vector<std::vector<Series<K>>> h(l, std::vector<Series<K>>());
        for (unsigned i = 0; i < l; ++i)
            for (unsigned j = 0; j < l; ++j) h[i].push_back(p[i + j]);
        out.push_back(series_det(h));
    }
    return out;
}

// The defining sum, expanded literally over l-subsets of the (repeated)
// roots. Test oracle; guarded against combinatorial blowup.
template <ScalarField K>
std::vector<Series<K>> discriminants_from_roots(
    const std::vector<std::pair<Series<K>, unsigned>>& roots) {
    std::vector<Series<K>> flat;
    for (auto& [r, m] : roots)
        for (unsigned i = 0; i < m; ++i) flat.push_back(r);
    unsigned d = static_cast<unsigned>(flat.size());
    if (d == 0 || d > 6) throw TooLarge("discriminants_from_roots supports 1 <= d <= 6");
    unsigned nvars = flat[0].nvars(), cap = flat[0].cap();
    std::vector<Series<K>> out;
    for (unsigned l = 1; l <= d; ++l) {
        Series<K> sum(nvars, cap);
        std::vector<unsigned> idx(l);
        // iterate l-subsets r_1 < ... < r_l
        for (unsigned i = 0; i < l; ++i) idx[i] = i;
        while (true) {
            Series<K> prod = Series<K>::constant(nvars, cap, K::one());
            for (unsigned i = 0; i < l; ++i)
                for (unsigned j = i + 1; j < l; ++j) {
                    Series<K> diff = flat[idx[i]] - flat[idx[j]];
                    prod *= diff * diff;
                }
            sum += prod;
            // next combination
            int t = static_cast<int>(l) - 1;
            while (t >= 0 && idx[t] == d - l + t) --t;
            if (t < 0) break;
            ++idx[t];
            for (unsigned i = t + 1; i < l; ++i) idx[i] = idx[i - 1] + 1;
        }
        out.push_back(sum);
    }
    return out;
}

// Report of the discriminant hypothesis test for one matrix family.
template <ScalarField K>
struct HypothesisReport {
    unsigned l_star = 0;            // index of the first nonzero Delta_l, scanning down from d
    Series<K> delta;                // Delta_A = Delta_{l_star}
    bool monomial_unit = false;     // Delta_A = X^alpha * unit?
    std::optional<Exponent> alpha;  // witness exponent when monomial_unit
    bool last_coeff_monomial_unit = false; // refined hypothesis on P_A
    unsigned reliable_degree = 0;   // all judgments are modulo this degree

    HypothesisReport() : delta(0, 0) {}
};

// Computes power sums, the Delta_l sequence and the index l* of the first
// nonzero one (the number of distinct roots), tests whether Delta_A is a
// monomial times a unit, and also tests the refined hypothesis on the last
// nonzero coefficient of P_A.
template <ScalarField K>
HypothesisReport<K> hypothesis_check(const SeriesMatrix<K>& a) {
    if (a.rows() != a.cols()) throw NotSquare("hypothesis_check");
    unsigned d = a.rows();
    auto p = power_sums(a, 2 * d - 2);
    auto deltas = generalized_discriminants(p, d);

    HypothesisReport<K> rep;
    rep.l_star = 1;
    for (unsigned l = d; l >= 1; --l) {
        if (!deltas[l - 1].is_zero_mod_reliable()) {
            rep.l_star = l;
            break;
        }
    }
    rep.delta = deltas[rep.l_star - 1];
    rep.reliable_degree = rep.delta.reliable();
    if (auto g = rep.delta.is_monomial_times_unit()) {
        rep.monomial_unit = true;
        rep.alpha = *g;
    }

    auto cp = char_poly(a);
    unsigned last = cp.last_nonzero_index();
    if (last == 0) {
        rep.last_coeff_monomial_unit = true; // P_A = Z^d, leading 1 is the unit
    } else {
        rep.last_coeff_monomial_unit = cp.coeff(last).is_monomial_times_unit().has_value();
    }
    return rep;
}

// Checks Delta_{l*} = mu_1 ... mu_l * disc((P)_red) on a constructed family
// with known roots and multiplicities; also cross-checks that P matches the
// product of its root factors. Test utility.
template <ScalarField K>
bool multiplicity_relation_check(const std::vector<std::pair<Series<K>, unsigned>>& roots,
                                 const CharPoly<K>& p) {
    unsigned d = 0;
    for (auto& [r, m] : roots) d += m;
    if (d != p.dim) return false;
    unsigned nvars = roots.at(0).first.nvars(), cap = roots.at(0).first.cap();

    // P(Z) = prod (Z - xi_i)^{mu_i}: expand and compare coefficients.
    std::vector<Series<K>> coeffs{Series<K>::constant(nvars, cap, K::one())};
    for (auto& [r, m] : roots)
        for (unsigned k = 0; k < m; ++k) {
            coeffs.push_back(Series<K>(nvars, cap));
            for (size_t i = coeffs.size() - 1; i >= 1; --i)
                coeffs[i] = coeffs[i] - r * coeffs[i - 1];
        }
    for (unsigned i = 1; i <= d; ++i)
        if (!equal_mod_reliable(coeffs[i], p.coeff(i))) return false;

    // Delta_{l*} from power sums of the prescribed roots.
    std::vector<Series<K>> ps;
    ps.push_back(Series<K>::constant(nvars, cap, K::from_int(static_cast<long>(d))));
    for (unsigned k = 1; k <= 2 * d - 2; ++k) {
        Series<K> s(nvars, cap);
        for (auto& [r, m] : roots) {
            Series<K> pw = Series<K>::constant(nvars, cap, K::one());
            for (unsigned t = 0; t < k; ++t) pw *= r;
            s += pw * K::from_int(static_cast<long>(m));
        }
        ps.push_back(s);
    }
    auto deltas = generalized_discriminants(ps, d);
    unsigned l = static_cast<unsigned>(roots.size());

    // mu_1 ... mu_l * product of squared differences of the distinct roots.
    K mu = K::one();
    for (auto& [r, m] : roots) mu = mu * K::from_int(static_cast<long>(m));
    Series<K> disc_red = Series<K>::constant(nvars, cap, K::one());
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j) {
            Series<K> diff = roots[i].first - roots[j].first;
            disc_red *= diff * diff;
        }
    return equal_mod_reliable(deltas[l - 1], disc_red * mu);
}

// Diagnostic consequence of the hypothesis (trace-free form): the ideal
// generated by the c_i^{d!/i} must be principal and generated by a monomial.
// Returns the witness exponent on success.
template <ScalarField K>
std::pair<bool, std::optional<Exponent>> coefficient_ideal_check(const CharPoly<K>& p) {
    unsigned d = p.dim;
    if (d < 2 || !p.coeff(1).is_zero_mod_reliable())
        throw DimensionMismatch("coefficient_ideal_check needs trace-free input of dim >= 2");
    unsigned long dfact = 1;
    for (unsigned i = 2; i <= d; ++i) dfact *= i;

    std::vector<std::pair<unsigned, Series<K>>> powers; // (i, c_i^{d!/i})
    for (unsigned i = 2; i <= d; ++i) {
        const Series<K>& ci = p.coeff(i);
        if (ci.is_zero_mod_reliable()) continue;
        Series<K> g = Series<K>::constant(ci.nvars(), ci.cap(), K::one());
        for (unsigned long k = 0; k < dfact / i; ++k) g *= ci;
        if (!g.is_zero()) powers.emplace_back(i, g);
    }
    if (powers.empty()) throw AllCoefficientsZero("all c_i vanish modulo the cap");

    for (auto& [j, gj] : powers) {
        auto gamma = gj.is_monomial_times_unit();
        if (!gamma) continue;
        bool minimal = true;
        for (auto& [i, gi] : powers)
            if (!gamma->divides(gi.monomial_content())) {
                minimal = false;
                break;
            }
        if (minimal) return {true, gamma};
    }
    return {false, std::nullopt};
}

} // namespace serimat
