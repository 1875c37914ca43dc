#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <utility>

#include "serimat/errors.hpp"

namespace serimat {

// ---------------------------------------------------------------------------
// Q(sqrt 2): elements a + b*sqrt(2) with a, b rational. This is the real
// subfield of the exact coefficient field; sqrt(2) is symbolic.
// ---------------------------------------------------------------------------
class SqrtRat {
public:
    SqrtRat() : a_(0), b_(0) {}
    SqrtRat(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }
    /* implicit */ SqrtRat(long v) : a_(v), b_(0) {}
    explicit SqrtRat(const mpq_class& a) : a_(a), b_(0) {}

    static SqrtRat sqrt2() { return SqrtRat(mpq_class(0), mpq_class(1)); }

    const mpq_class& rat() const { return a_; }
    const mpq_class& rat_sqrt2() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    SqrtRat operator-() const { return SqrtRat(-a_, -b_); }
    SqrtRat operator+(const SqrtRat& o) const { return SqrtRat(a_ + o.a_, b_ + o.b_); }
    SqrtRat operator-(const SqrtRat& o) const { return SqrtRat(a_ - o.a_, b_ - o.b_); }
    SqrtRat operator*(const SqrtRat& o) const {
        return SqrtRat(a_ * o.a_ + 2 * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
    }
    SqrtRat operator/(const SqrtRat& o) const {
        if (o.is_zero()) throw DivisionByZero("in Q(sqrt 2)");
        // 1/(a+b s2) = (a - b s2)/(a^2 - 2 b^2); the denominator is nonzero
        // because sqrt(2) is irrational.
        mpq_class n = o.a_ * o.a_ - 2 * o.b_ * o.b_;
        return SqrtRat((a_ * o.a_ - 2 * b_ * o.b_) / n, (b_ * o.a_ - a_ * o.b_) / n);
    }
    SqrtRat& operator+=(const SqrtRat& o) { return *this = *this + o; }
    SqrtRat& operator-=(const SqrtRat& o) { return *this = *this - o; }
    SqrtRat& operator*=(const SqrtRat& o) { return *this = *this * o; }

    bool operator==(const SqrtRat& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const SqrtRat& o) const { return !(*this == o); }

    // Exact sign of a + b*sqrt(2).
    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 with 2 b^2, the larger term wins
        int c = cmp(a_ * a_, 2 * b_ * b_);
        return c == 0 ? 0 : (c > 0 ? sa : sb);
    }
    bool operator<(const SqrtRat& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const SqrtRat& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const SqrtRat& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const SqrtRat& o) const { return (*this - o).sign() >= 0; }

    double to_double() const { return a_.get_d() + b_.get_d() * 1.4142135623730951; }

    // Exact square root within Q(sqrt 2) of a nonnegative element, when one
    // exists.
    static std::optional<SqrtRat> sqrt_nonneg(const SqrtRat& s);

private:
    mpq_class a_, b_;
};

// ---------------------------------------------------------------------------
// The exact coefficient field Q(i, sqrt 2): re + im*i with re, im in
// Q(sqrt 2). Immutable value type; all operations are pure.
// ---------------------------------------------------------------------------
class ExactScalar {
public:
    using Real = SqrtRat;
    static constexpr bool exact = true;

    ExactScalar() = default;
    ExactScalar(SqrtRat re, SqrtRat im) : re_(std::move(re)), im_(std::move(im)) {}

    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return from_int(1); }
    static ExactScalar from_int(long v) { return ExactScalar(SqrtRat(v), SqrtRat(0)); }
    static ExactScalar from_rational(const mpq_class& q) {
        return ExactScalar(SqrtRat(q), SqrtRat(0));
    }
    static ExactScalar make(mpq_class a, mpq_class b, mpq_class c, mpq_class d) {
        return ExactScalar(SqrtRat(std::move(a), std::move(b)), SqrtRat(std::move(c), std::move(d)));
    }
    static ExactScalar i() { return ExactScalar(SqrtRat(0), SqrtRat(1L)); }
    static ExactScalar sqrt2() { return ExactScalar(SqrtRat::sqrt2(), SqrtRat(0)); }

    const SqrtRat& re() const { return re_; }
    const SqrtRat& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    ExactScalar operator-() const { return ExactScalar(-re_, -im_); }
    ExactScalar operator+(const ExactScalar& o) const {
        return ExactScalar(re_ + o.re_, im_ + o.im_);
    }
    ExactScalar operator-(const ExactScalar& o) const {
        return ExactScalar(re_ - o.re_, im_ - o.im_);
    }
    ExactScalar operator*(const ExactScalar& o) const {
        return ExactScalar(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    ExactScalar operator/(const ExactScalar& o) const {
        if (o.is_zero()) throw DivisionByZero("exact scalar");
        SqrtRat n = o.re_ * o.re_ + o.im_ * o.im_;
        ExactScalar num = *this * ExactScalar(o.re_, -o.im_);
        return ExactScalar(num.re_ / n, num.im_ / n);
    }
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    bool operator==(const ExactScalar& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    // |s|^2 as an element of the real subfield.
    SqrtRat abs2() const { return re_ * re_ + im_ * im_; }

    // sqrt of a nonnegative real element; throws NegativeInput /
    // NotASquareInField.
    static ExactScalar sqrt_nonneg_real(const ExactScalar& s);

    // General square root within the field, when one exists.
    static std::optional<ExactScalar> sqrt_in_field(const ExactScalar& s);

    // Some t with |t|^2 = rho for real rho > 0, preferring representatives
    // that do not enlarge the Gaussian-rational subfield: plain rational
    // sqrt, then q*sqrt(2), then x+yi, then a real Q(sqrt 2) sqrt, then
    // x + y sqrt(2) i, then (1+i)-scaled forms.
    static std::optional<ExactScalar> norm_representative(const SqrtRat& rho);

private:
    SqrtRat re_, im_;
};

inline ExactScalar conj(const ExactScalar& s) { return ExactScalar(s.re(), -s.im()); }
inline bool is_zero(const ExactScalar& s) { return s.is_zero(); }
inline bool is_real(const ExactScalar& s) { return s.is_real(); }
inline ExactScalar div_real(const ExactScalar& s, const SqrtRat& r) {
    return ExactScalar(s.re() / r, s.im() / r);
}
inline double to_double(const SqrtRat& r) { return r.to_double(); }
inline double approx_abs(const ExactScalar& s) {
    double r = s.re().to_double(), i = s.im().to_double();
    return std::sqrt(r * r + i * i);
}
// Deterministic total order for canonical sorting (not the field order).
inline bool scalar_less(const ExactScalar& x, const ExactScalar& y) {
    if (x.re().rat() != y.re().rat()) return x.re().rat() < y.re().rat();
    if (x.re().rat_sqrt2() != y.re().rat_sqrt2()) return x.re().rat_sqrt2() < y.re().rat_sqrt2();
    if (x.im().rat() != y.im().rat()) return x.im().rat() < y.im().rat();
    return x.im().rat_sqrt2() < y.im().rat_sqrt2();
}

// ---------------------------------------------------------------------------
// Arbitrary-precision floating complex scalar with a process-global precision
// (bits) and zero tolerance eps. is_zero is a semantic judgment: |s| <= eps.
// ---------------------------------------------------------------------------
class FloatScalar {
public:
    using Real = mpf_class;
    static constexpr bool exact = false;

    struct Context {
        unsigned precision_bits = 256;
        mpf_class eps;
    };
    static Context& context();
    // Sets global precision and tolerance. Accepts "2^-128" or a decimal
    // string for the tolerance.
    static void configure(unsigned precision_bits, const std::string& tolerance = "2^-128");
    static mpf_class parse_tolerance(const std::string& s);

    FloatScalar() : re_(0), im_(0) {}
    FloatScalar(mpf_class re, mpf_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static FloatScalar zero() { return FloatScalar(); }
    static FloatScalar one() { return from_int(1); }
    static FloatScalar from_int(long v) { return FloatScalar(mpf_class(v), mpf_class(0)); }
    static FloatScalar i() { return FloatScalar(mpf_class(0), mpf_class(1)); }
    static FloatScalar sqrt2() { return FloatScalar(sqrt(mpf_class(2)), mpf_class(0)); }
    static FloatScalar from_exact(const ExactScalar& s);

    const mpf_class& re() const { return re_; }
    const mpf_class& im() const { return im_; }

    bool is_zero() const {
        const mpf_class& e = context().eps;
        return re_ * re_ + im_ * im_ <= e * e;
    }
    bool is_real() const {
        mpf_class e = context().eps;
        return abs(im_) <= e;
    }

    FloatScalar operator-() const { return FloatScalar(-re_, -im_); }
    FloatScalar operator+(const FloatScalar& o) const {
        return FloatScalar(re_ + o.re_, im_ + o.im_);
    }
    FloatScalar operator-(const FloatScalar& o) const {
        return FloatScalar(re_ - o.re_, im_ - o.im_);
    }
    FloatScalar operator*(const FloatScalar& o) const {
        return FloatScalar(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    FloatScalar operator/(const FloatScalar& o) const {
        if (o.is_zero()) throw DivisionByZero("float scalar");
        mpf_class n = o.re_ * o.re_ + o.im_ * o.im_;
        return FloatScalar((re_ * o.re_ + im_ * o.im_) / n, (im_ * o.re_ - re_ * o.im_) / n);
    }
    FloatScalar& operator+=(const FloatScalar& o) { return *this = *this + o; }
    FloatScalar& operator-=(const FloatScalar& o) { return *this = *this - o; }
    FloatScalar& operator*=(const FloatScalar& o) { return *this = *this * o; }

    // Bitwise comparison; semantic zero tests go through is_zero.
    bool operator==(const FloatScalar& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const FloatScalar& o) const { return !(*this == o); }

    mpf_class abs2() const { return re_ * re_ + im_ * im_; }

    static FloatScalar sqrt_nonneg_real(const FloatScalar& s);
    static std::optional<FloatScalar> sqrt_in_field(const FloatScalar& s);
    static std::optional<FloatScalar> norm_representative(const mpf_class& rho) {
        if (rho < 0) return std::nullopt;
        return FloatScalar(sqrt(rho), mpf_class(0));
    }

    static std::string to_decimal(const mpf_class& x);
    static mpf_class from_decimal(const std::string& s);

private:
    mpf_class re_, im_;
};

inline FloatScalar conj(const FloatScalar& s) { return FloatScalar(s.re(), -s.im()); }
inline bool is_zero(const FloatScalar& s) { return s.is_zero(); }
inline bool is_real(const FloatScalar& s) { return s.is_real(); }
inline FloatScalar div_real(const FloatScalar& s, const mpf_class& r) {
    return FloatScalar(s.re() / r, s.im() / r);
}
inline double to_double(const mpf_class& r) { return r.get_d(); }
inline double approx_abs(const FloatScalar& s) {
    mpf_class a = s.abs2();
    return std::sqrt(a.get_d());
}
inline bool scalar_less(const FloatScalar& x, const FloatScalar& y) {
    if (x.re() != y.re()) return x.re() < y.re();
    return x.im() < y.im();
}

// ---------------------------------------------------------------------------
// Concept shared by both backends.
// ---------------------------------------------------------------------------
template <typename K>
concept ScalarField = requires(const K& a, const K& b) {
    typename K::Real;
    { K::zero() } -> std::same_as<K>;
    { K::one() } -> std::same_as<K>;
    { K::from_int(1L) } -> std::same_as<K>;
    { a + b } -> std::same_as<K>;
    { a - b } -> std::same_as<K>;
    { a * b } -> std::same_as<K>;
    { a / b } -> std::same_as<K>;
    { -a } -> std::same_as<K>;
    { conj(a) } -> std::same_as<K>;
    { is_zero(a) } -> std::same_as<bool>;
    { a == b } -> std::same_as<bool>;
};

static_assert(ScalarField<ExactScalar>);
static_assert(ScalarField<FloatScalar>);

} // namespace serimat
