#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "serimat/errors.hpp"
#include "serimat/scalar.hpp"

namespace serimat {

// Univariate polynomial over the scalar field, coefficients lowest first.
// Used for characteristic polynomials of constant matrices and the Bezout
// certificates feeding the Sylvester solver.
template <ScalarField K>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(const K& v) { return Poly(std::vector<K>{v}); }
    static Poly from_roots(const std::vector<K>& roots) {
        Poly p = constant(K::one());
        for (auto& r : roots) p = p * Poly({-r, K::one()});
        return p;
    }
    Poly(std::initializer_list<K> init) : c_(init) { trim(); }

    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(unsigned i) const { return i < c_.size() ? c_[i] : K::zero(); }
    K leading() const { return c_.empty() ? K::zero() : c_.back(); }

    Poly operator-() const {
        Poly r(*this);
        for (auto& v : r.c_) v = -v;
        return r;
    }
    Poly operator+(const Poly& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()), K::zero());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        if (c_.empty() || o.c_.empty()) return Poly();
        std::vector<K> r(c_.size() + o.c_.size() - 1, K::zero());
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(std::move(r));
    }
    Poly operator*(const K& v) const {
        Poly r(*this);
        for (auto& x : r.c_) x = x * v;
        r.trim();
        return r;
    }

    // Euclidean division by a nonzero divisor.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw DivisionByZero("polynomial division");
        Poly q, r(*this);
        q.c_.assign(c_.size(), K::zero());
        K lead_inv = K::one() / d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            K f = r.leading() * lead_inv;
            q.c_[k] = q.c_[k] + f;
            for (int i = 0; i <= d.degree(); ++i)
                r.c_[k + i] = r.c_[k + i] - f * d.c_[i];
            r.trim_leading_zero();
        }
        q.trim();
        r.trim();
        return {q, r};
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * K::from_int(static_cast<long>(i));
        return Poly(std::move(r));
    }

    K eval(const K& x) const {
        K acc = K::zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * (K::one() / leading());
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && serimat::is_zero(c_.back())) c_.pop_back();
    }
    void trim_leading_zero() { trim(); }

    std::vector<K> c_;
};

// Monic gcd by the Euclidean remainder sequence.
template <ScalarField K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Bezout certificate U*p + V*q = 1 with deg U < deg q and deg V < deg p.
// Throws NotCoprime when gcd(p, q) is nonconstant.
template <ScalarField K>
std::pair<Poly<K>, Poly<K>> extended_euclid(const Poly<K>& p, const Poly<K>& q) {
    if (p.is_zero() || q.is_zero()) throw NotCoprime("zero argument");
    Poly<K> r0 = p, r1 = q;
    Poly<K> s0 = Poly<K>::constant(K::one()), s1 = Poly<K>::zero();
    Poly<K> t0 = Poly<K>::zero(), t1 = Poly<K>::constant(K::one());
    while (!r1.is_zero()) {
        auto [quo, rem] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        Poly<K> s2 = s0 - quo * s1;
        Poly<K> t2 = t0 - quo * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.degree() != 0) throw NotCoprime("nontrivial gcd");
    K inv = K::one() / r0.leading();
    Poly<K> u = s0 * inv, v = t0 * inv;
    // Enforce the degree bounds: reduce u mod q and recover v exactly.
    if (q.degree() >= 0 && u.degree() >= q.degree()) {
        auto [quo, rem] = u.divmod(q);
        u = rem;
        v = v + quo * p;
    }
    return {u, v};
}

// Roots of an exact polynomial within Q(i, sqrt 2), with multiplicities.
// Linear and quadratic pieces are solved exactly; higher-degree factors are
// deflated by Gaussian-rational root search. Returns nullopt when the
// polynomial does not split over the field by this search.
std::optional<std::vector<std::pair<ExactScalar, unsigned>>> roots_in_field(
    const Poly<ExactScalar>& p);

} // namespace serimat
