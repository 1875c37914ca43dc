#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "serimat/errors.hpp"
#include "serimat/scalar.hpp"

namespace serimat {

// ---------------------------------------------------------------------------
// Exponent vector (alpha_1, ..., alpha_n); total degree = sum alpha_i.
// ---------------------------------------------------------------------------
struct Exponent {
    std::vector<uint32_t> e;

    Exponent() = default;
    explicit Exponent(unsigned nvars) : e(nvars, 0) {}
    Exponent(std::initializer_list<uint32_t> init) : e(init) {}

    unsigned size() const { return static_cast<unsigned>(e.size()); }
    uint32_t operator[](unsigned i) const { return e[i]; }
    uint32_t& operator[](unsigned i) { return e[i]; }

    unsigned total_degree() const { return std::accumulate(e.begin(), e.end(), 0u); }
    bool is_zero() const {
        return std::all_of(e.begin(), e.end(), [](uint32_t v) { return v == 0; });
    }

    bool operator==(const Exponent& o) const { return e == o.e; }
    bool operator!=(const Exponent& o) const { return e != o.e; }

    // Coordinatewise alpha <= beta.
    bool divides(const Exponent& o) const {
        for (unsigned i = 0; i < size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Exponent operator+(const Exponent& o) const {
        Exponent r(size());
        for (unsigned i = 0; i < size(); ++i) r.e[i] = e[i] + o.e[i];
        return r;
    }
    // Requires o.divides(*this).
    Exponent operator-(const Exponent& o) const {
        Exponent r(size());
        for (unsigned i = 0; i < size(); ++i) r.e[i] = e[i] - o.e[i];
        return r;
    }
    static Exponent cw_min(const Exponent& a, const Exponent& b) {
        Exponent r(a.size());
        for (unsigned i = 0; i < a.size(); ++i) r.e[i] = std::min(a.e[i], b.e[i]);
        return r;
    }
};

// Graded lexicographic order; fixes canonical term ordering everywhere.
struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        unsigned da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.e < b.e;
    }
};

// ---------------------------------------------------------------------------
// Sparse truncated multivariate power series over K, computed modulo total
// degree > cap. Each value also carries a reliable degree <= cap: identities
// are certified only through that degree (monomial division lowers it).
// ---------------------------------------------------------------------------
template <ScalarField K>
class Series {
public:
    using TermMap = std::map<Exponent, K, GrlexLess>;

    Series() : nvars_(0), cap_(0), reliable_(0) {}
    Series(unsigned nvars, unsigned cap) : nvars_(nvars), cap_(cap), reliable_(cap) {}

    static Series zero(unsigned nvars, unsigned cap) { return Series(nvars, cap); }
    static Series constant(unsigned nvars, unsigned cap, const K& c) {
        Series s(nvars, cap);
        s.add_term(Exponent(nvars), c);
        return s;
    }
    static Series variable(unsigned nvars, unsigned cap, unsigned i) {
        Series s(nvars, cap);
        Exponent a(nvars);
        a[i] = 1;
        s.add_term(a, K::one());
        return s;
    }
    static Series monomial(unsigned nvars, unsigned cap, const Exponent& a, const K& c) {
        Series s(nvars, cap);
        s.add_term(a, c);
        return s;
    }

    unsigned nvars() const { return nvars_; }
    unsigned cap() const { return cap_; }
    unsigned reliable() const { return reliable_; }
    const TermMap& terms() const { return terms_; }

    Series& set_reliable(unsigned r) {
        reliable_ = std::min(r, cap_);
        return *this;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_zero_mod_reliable() const {
        return terms_.empty() || terms_.begin()->first.total_degree() > reliable_;
    }

    // Minimal total degree in the support; nullopt for the zero series
    // ("order infinity").
    std::optional<unsigned> order() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first.total_degree();
    }

    K coeff(const Exponent& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? K::zero() : it->second;
    }
    K constant_term() const { return coeff(Exponent(nvars_)); }

    void add_term(const Exponent& a, const K& c) {
        if (a.size() != nvars_) throw DimensionMismatch("exponent arity");
        if (a.total_degree() > cap_) return;
        auto [it, inserted] = terms_.emplace(a, c);
        if (!inserted) it->second = it->second + c;
        if (serimat::is_zero(it->second)) terms_.erase(it);
    }

    Series operator-() const {
        Series r(*this);
        for (auto& [a, c] : r.terms_) c = -c;
        return r;
    }
    Series operator+(const Series& o) const {
        check_compatible(o);
        Series r(*this);
        r.reliable_ = std::min(reliable_, o.reliable_);
        for (auto& [a, c] : o.terms_) r.add_term(a, c);
        return r;
    }
    Series operator-(const Series& o) const { return *this + (-o); }

    Series operator*(const Series& o) const {
        check_compatible(o);
        Series r(nvars_, cap_);
        r.reliable_ = mul_reliable(o);
        for (auto& [a, ca] : terms_) {
            unsigned da = a.total_degree();
            for (auto& [b, cb] : o.terms_) {
                if (da + b.total_degree() > cap_) break; // grlex: degrees ascend
                r.add_term(a + b, ca * cb);
            }
        }
        return r;
    }

    Series operator*(const K& c) const {
        Series r(nvars_, cap_);
        r.reliable_ = reliable_;
        if (serimat::is_zero(c)) return r;
        for (auto& [a, v] : terms_) r.add_term(a, v * c);
        return r;
    }

    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    // Exact equality of stored data (metadata and terms).
    bool operator==(const Series& o) const {
        return nvars_ == o.nvars_ && cap_ == o.cap_ && terms_ == o.terms_;
    }

    friend Series conj(const Series& f) {
        Series r(f.nvars_, f.cap_);
        r.reliable_ = f.reliable_;
        for (auto& [a, c] : f.terms_) r.terms_.emplace(a, conj(c));
        return r;
    }

    // Multiplicative inverse of a unit, via the geometric series.
    Series invert_unit() const {
        K c0 = constant_term();
        if (serimat::is_zero(c0)) throw NotAUnit("invert_unit");
        K u0 = K::one() / c0;
        Series g = Series::constant(nvars_, cap_, K::one()) - *this * u0;
        g.terms_.erase(Exponent(nvars_)); // constant part cancels by construction
        Series acc = Series::constant(nvars_, cap_, K::one());
        for (unsigned j = 0; j < cap_; ++j) {
            acc = Series::constant(nvars_, cap_, K::one()) + g * acc;
        }
        acc = acc * u0;
        acc.reliable_ = reliable_;
        return acc;
    }

    // Coordinatewise-minimal exponent over the support: the maximal monomial
    // dividing the series.
    Exponent monomial_content() const {
        if (terms_.empty()) throw ZeroSeries("monomial_content");
        Exponent g = terms_.begin()->first;
        for (auto& [a, c] : terms_) g = Exponent::cw_min(g, a);
        return g;
    }

    // True iff f = X^gamma * u with u(0) != 0, judged modulo the cap; the
    // witness gamma is returned.
    std::optional<Exponent> is_monomial_times_unit() const {
        if (terms_.empty()) return std::nullopt;
        Exponent g = monomial_content();
        if (terms_.count(g) == 0) return std::nullopt;
        return g;
    }

    Series divide_by_monomial(const Exponent& g) const {
        Series r(nvars_, cap_);
        unsigned dg = g.total_degree();
        r.reliable_ = reliable_ >= dg ? reliable_ - dg : 0;
        for (auto& [a, c] : terms_) {
            if (!g.divides(a)) throw NotDivisible("divide_by_monomial");
            r.terms_.emplace(a - g, c);
        }
        return r;
    }

    Series multiply_by_monomial(const Exponent& g) const {
        Series r(nvars_, cap_);
        r.reliable_ = std::min<unsigned>(cap_, reliable_ + g.total_degree());
        for (auto& [a, c] : terms_) {
            Exponent b = a + g;
            if (b.total_degree() <= cap_) r.terms_.emplace(b, c);
        }
        return r;
    }

    // Square root of a unit with principal constant term, by the Newton
    // iteration s <- (s + f/s)/2 lifted order by order.
    Series sqrt_unit() const {
        K c0 = constant_term();
        if (serimat::is_zero(c0)) throw NotAUnit("sqrt_unit");
        K s0;
        if (serimat::is_real(c0) && !negative_real(c0)) {
            s0 = K::sqrt_nonneg_real(c0);
        } else {
            auto r = K::sqrt_in_field(c0);
            if (!r) throw NotASquareInField("sqrt_unit: constant term");
            s0 = *r;
        }
        Series s = Series::constant(nvars_, cap_, s0);
        K half = K::one() / K::from_int(2);
        unsigned correct = 0; // exact through this order
        while (correct < cap_) {
            s = (s + *this * s.invert_unit()) * half;
            correct = 2 * correct + 1;
        }
        s.reliable_ = reliable_;
        return s;
    }

    // Composition f(s_1, ..., s_n) for targets of order >= 1 sharing a common
    // (nvars, cap).
    Series substitute(const std::vector<Series>& targets) const {
        if (targets.size() != nvars_) throw DimensionMismatch("substitute arity");
        unsigned out_n = nvars_, out_cap = cap_;
        unsigned rel = reliable_;
        if (!targets.empty()) {
            out_n = targets[0].nvars();
            out_cap = targets[0].cap();
        }
        for (auto& t : targets) {
            if (t.nvars() != out_n || t.cap() != out_cap)
                throw DimensionMismatch("substitution targets disagree");
            auto ord = t.order();
            if (ord && *ord == 0) throw OrderViolation("substitution target is a unit");
            rel = std::min(rel, t.reliable());
        }
        // Power tables, built lazily per variable.
        std::vector<std::vector<Series>> pw(nvars_);
        auto power = [&](unsigned i, uint32_t k) -> const Series& {
            auto& tab = pw[i];
            if (tab.empty()) tab.push_back(Series::constant(out_n, out_cap, K::one()));
            while (tab.size() <= k) tab.push_back(tab.back() * targets[i]);
            return tab[k];
        };
        Series r(out_n, out_cap);
        for (auto& [a, c] : terms_) {
            Series term = Series::constant(out_n, out_cap, c);
            for (unsigned i = 0; i < nvars_; ++i)
                if (a[i] > 0) term = term * power(i, a[i]);
            r += term;
        }
        r.reliable_ = std::min(rel, out_cap);
        return r;
    }

    // Terms of total degree exactly k.
    Series homogeneous_part(unsigned k) const {
        Series r(nvars_, cap_);
        r.reliable_ = reliable_;
        for (auto& [a, c] : terms_)
            if (a.total_degree() == k) r.terms_.emplace(a, c);
        return r;
    }

    // Terms of total degree <= k.
    Series truncated(unsigned k) const {
        Series r(nvars_, cap_);
        r.reliable_ = reliable_;
        for (auto& [a, c] : terms_)
            if (a.total_degree() <= k) r.terms_.emplace(a, c);
        return r;
    }

    // Largest |coeff|^2 among terms of total degree <= through.
    typename K::Real max_abs2(unsigned through) const {
        typename K::Real m(0);
        for (auto& [a, c] : terms_) {
            if (a.total_degree() > through) break;
            auto v = c.abs2();
            if (m < v) m = v;
        }
        return m;
    }

private:
    void check_compatible(const Series& o) const {
        if (nvars_ != o.nvars_ || cap_ != o.cap_)
            throw DimensionMismatch("series (nvars, cap) mismatch");
    }

    // Reliable degree of a product: the unknown tail of one factor meets the
    // known part of the other at order > reliable + order(other).
    unsigned mul_reliable(const Series& o) const {
        const unsigned inf = 1u << 20;
        unsigned orda = terms_.empty() ? inf : terms_.begin()->first.total_degree();
        unsigned ordb = o.terms_.empty() ? inf : o.terms_.begin()->first.total_degree();
        unsigned b1 = reliable_ >= inf - ordb ? inf : reliable_ + ordb;
        unsigned b2 = o.reliable_ >= inf - orda ? inf : o.reliable_ + orda;
        return std::min(cap_, std::min(b1, b2));
    }

    static bool negative_real(const K& c) {
        if constexpr (K::exact)
            return c.re().sign() < 0;
        else
            return c.re() < 0;
    }

    unsigned nvars_;
    unsigned cap_;
    unsigned reliable_;
    TermMap terms_;
};

// f and g agree on every term of total degree <= through.
template <ScalarField K>
bool equal_through_degree(const Series<K>& f, const Series<K>& g, unsigned through) {
    return (f - g).truncated(through).is_zero();
}

template <ScalarField K>
bool equal_mod_reliable(const Series<K>& f, const Series<K>& g) {
    return equal_through_degree(f, g, std::min(f.reliable(), g.reliable()));
}

// Real and imaginary part series (coefficientwise; the variables are real).
template <ScalarField K>
Series<K> real_part(const Series<K>& f) {
    K half = K::one() / K::from_int(2);
    return (f + conj(f)) * half;
}
template <ScalarField K>
Series<K> imag_part(const Series<K>& f) {
    K half_over_i = K::one() / (K::from_int(2) * K::i());
    return (f - conj(f)) * half_over_i;
}

// Sign of the real part of the leading (lowest grlex) coefficient; used to
// orient real series conventionally.
template <ScalarField K>
bool leading_negative(const Series<K>& f) {
    if (f.terms().empty()) return false;
    const K& c = f.terms().begin()->second;
    if constexpr (K::exact)
        return c.re().sign() < 0;
    else
        return c.re() < 0;
}

// Deterministic total order on series, for canonical multiset comparisons:
// term-by-term graded-lex on exponents, then scalar_less on coefficients.
template <ScalarField K>
bool series_less(const Series<K>& f, const Series<K>& g) {
    auto it = f.terms().begin(), jt = g.terms().begin();
    GrlexLess lt;
    while (it != f.terms().end() && jt != g.terms().end()) {
        if (it->first != jt->first) return lt(it->first, jt->first);
        if (!(it->second == jt->second)) return scalar_less(it->second, jt->second);
        ++it;
        ++jt;
    }
    return it == f.terms().end() && jt != g.terms().end();
}

} // namespace serimat
