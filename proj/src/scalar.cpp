#include "serimat/scalar.hpp"

#include <cctype>

#include "serimat/numtheory.hpp"

namespace serimat {

using numtheory::sqrt_rational;

std::optional<SqrtRat> SqrtRat::sqrt_nonneg(const SqrtRat& s) {
    if (s.sign() < 0) return std::nullopt;
    if (s.is_zero()) return SqrtRat(0);
    if (s.b_ == 0) {
        // t = x or t = y*sqrt(2): x^2 = a or 2 y^2 = a.
        if (auto x = sqrt_rational(s.a_)) return SqrtRat(*x, mpq_class(0));
        if (auto y = sqrt_rational(s.a_ / 2)) return SqrtRat(mpq_class(0), *y);
        return std::nullopt;
    }
    // (x + y sqrt 2)^2 = (x^2 + 2 y^2) + 2 x y sqrt 2; the norm a^2 - 2 b^2
    // must be a rational square and (a +- q)/2 a rational square.
    mpq_class disc = s.a_ * s.a_ - 2 * s.b_ * s.b_;
    auto q = sqrt_rational(disc);
    if (!q) return std::nullopt;
    for (int sign : {  1, -1 }) {
        mpq_class x2 = (s.a_ + sign * *q) / 2;
        auto x = sqrt_rational(x2);
        if (!x || *x == 0) continue;
        mpq_class y = s.b_ / (2 * *x);
        SqrtRat t(*x, y);
        if (t * t == s) return t.sign() >= 0 ? t : -t;
    }
    return std::nullopt;
}

ExactScalar ExactScalar::sqrt_nonneg_real(const ExactScalar& s) {
    if (!s.is_real()) throw NegativeInput("sqrt_nonneg_real: input not real");
    if (s.re().sign() < 0) throw NegativeInput("sqrt_nonneg_real: input negative");
    auto r = SqrtRat::sqrt_nonneg(s.re());
    if (!r) throw NotASquareInField("sqrt_nonneg_real in Q(sqrt 2)");
    return ExactScalar(*r, SqrtRat(0));
}

std::optional<ExactScalar> ExactScalar::sqrt_in_field(const ExactScalar& s) {
    if (s.is_zero()) return zero();
    if (s.is_real()) {
        if (s.re().sign() >= 0) {
            auto r = SqrtRat::sqrt_nonneg(s.re());
            if (!r) return std::nullopt;
            return ExactScalar(*r, SqrtRat(0));
        }
        auto r = SqrtRat::sqrt_nonneg(-s.re());
        if (!r) return std::nullopt;
        return ExactScalar(SqrtRat(0), *r);
    }
    // w = a+bi with a^2 - b^2 = x, 2ab = y; a^2 = (x + |s|)/2 where |s| must
    // lie in the real subfield.
    auto nu = SqrtRat::sqrt_nonneg(s.abs2());
    if (!nu) return std::nullopt;
    auto a = SqrtRat::sqrt_nonneg((s.re() + *nu) / SqrtRat(2L));
    if (!a || a->is_zero()) return std::nullopt;
    SqrtRat b = s.im() / (SqrtRat(2L) * *a);
    ExactScalar w(*a, b);
    if (w * w == s) return w;
    return std::nullopt;
}

std::optional<ExactScalar> ExactScalar::norm_representative(const SqrtRat& rho) {
    if (rho.sign() <= 0) return std::nullopt;
    if (rho.is_rational()) {
        const mpq_class& r = rho.rat();
        if (auto x = sqrt_rational(r)) return ExactScalar(SqrtRat(*x), SqrtRat(0));
        if (auto y = sqrt_rational(r / 2))
            return ExactScalar(SqrtRat(mpq_class(0), *y), SqrtRat(0));
        if (auto xy = numtheory::two_squares_rational(r))
            return make(xy->first, 0, xy->second, 0);
        if (auto xy = numtheory::square_plus_two_square_rational(r))
            return ExactScalar(SqrtRat(xy->first), SqrtRat(mpq_class(0), xy->second));
        return std::nullopt;
    }
    // Irrational rho: try a real square root in Q(sqrt 2), then the
    // (1+i)*sqrt(rho/2) form.
    if (auto t = SqrtRat::sqrt_nonneg(rho)) return ExactScalar(*t, SqrtRat(0));
    if (auto t = SqrtRat::sqrt_nonneg(rho / SqrtRat(2L))) return ExactScalar(*t, *t);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// FloatScalar
// ---------------------------------------------------------------------------

FloatScalar::Context& FloatScalar::context() {
    static Context ctx = [] {
        Context c;
        mpf_set_default_prec(c.precision_bits);
        c.eps = parse_tolerance("2^-128");
        return c;
    }();
    return ctx;
}

void FloatScalar::configure(unsigned precision_bits, const std::string& tolerance) {
    mpf_set_default_prec(precision_bits);
    context().precision_bits = precision_bits;
    context().eps = parse_tolerance(tolerance);
}

mpf_class FloatScalar::parse_tolerance(const std::string& s) {
    if (s.rfind("2^", 0) == 0) {
        long e = std::stol(s.substr(2));
        mpf_class r(1);
        if (e >= 0)
            mpf_mul_2exp(r.get_mpf_t(), r.get_mpf_t(), static_cast<unsigned long>(e));
        else
            mpf_div_2exp(r.get_mpf_t(), r.get_mpf_t(), static_cast<unsigned long>(-e));
        return r;
    }
    return from_decimal(s);
}

FloatScalar FloatScalar::from_exact(const ExactScalar& s) {
    mpf_class s2 = sqrt(mpf_class(2));
    auto conv = [&](const SqrtRat& r) {
        return mpf_class(r.rat()) + mpf_class(r.rat_sqrt2()) * s2;
    };
    return FloatScalar(conv(s.re()), conv(s.im()));
}

FloatScalar FloatScalar::sqrt_nonneg_real(const FloatScalar& s) {
    const mpf_class& eps = context().eps;
    if (abs(s.im()) > eps) throw NegativeInput("sqrt_nonneg_real: input not real");
    if (s.re() < -eps) throw NegativeInput("sqrt_nonneg_real: input negative");
    mpf_class r = s.re() < 0 ? mpf_class(0) : mpf_class(sqrt(s.re()));
    return FloatScalar(r, mpf_class(0));
}

std::optional<FloatScalar> FloatScalar::sqrt_in_field(const FloatScalar& s) {
    if (s.is_zero()) return zero();
    mpf_class r = sqrt(s.abs2());
    mpf_class a2 = (r + s.re()) / 2;
    mpf_class b2 = (r - s.re()) / 2;
    if (a2 < 0) a2 = 0;
    if (b2 < 0) b2 = 0;
    mpf_class a = sqrt(a2), b = sqrt(b2);
    if (s.im() < 0) b = -b;
    return FloatScalar(a, b);
}

std::string FloatScalar::to_decimal(const mpf_class& x) {
    if (x == 0) return "0";
    mp_exp_t exp = 0;
    std::string digits = x.get_str(exp, 10, 0);
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(0, 1);
    return (neg ? "-0." : "0.") + digits + "e" + std::to_string(exp);
}

mpf_class FloatScalar::from_decimal(const std::string& s) {
    mpf_class r;
    if (mpf_set_str(r.get_mpf_t(), s.c_str(), 10) != 0)
        throw ParseError("bad decimal literal: " + s);
    return r;
}

} // namespace serimat
