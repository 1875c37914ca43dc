#include <algorithm>

#include "serimat/numtheory.hpp"
#include "serimat/poly.hpp"

namespace serimat {

namespace {

using P = Poly<ExactScalar>;

// Roots of a monic quadratic z^2 + b z + c over Q(i, sqrt 2), if the
// discriminant has a square root in the field.
std::optional<std::pair<ExactScalar, ExactScalar>> quadratic_roots(const ExactScalar& b,
                                                                   const ExactScalar& c) {
    ExactScalar disc = b * b - ExactScalar::from_int(4) * c;
    auto s = ExactScalar::sqrt_in_field(disc);
    if (!s) return std::nullopt;
    ExactScalar half = ExactScalar::one() / ExactScalar::from_int(2);
    return std::make_pair((-b + *s) * half, (-b - *s) * half);
}

// One root in Q(i) of a monic polynomial with Gaussian-rational coefficients,
// by enumerating Gaussian-integer divisors of the transformed constant term.
std::optional<ExactScalar> gaussian_rational_root(const P& p) {
    int d = p.degree();
    // Common denominator of all coefficients.
    mpz_class den = 1;
    for (int i = 0; i <= d; ++i) {
        const ExactScalar& c = p.coeff(static_cast<unsigned>(i));
        if (!c.re().is_rational() || !c.im().is_rational()) return std::nullopt;
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), c.re().rat().get_den().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), l.get_mpz_t(), c.im().rat().get_den().get_mpz_t());
    }
    // z = w/den turns p monic over Z[i]; any root w is a Gaussian integer
    // dividing the constant coefficient den^d * p(0).
    mpq_class scale(den);
    mpq_class c0re = p.coeff(0).re().rat(), c0im = p.coeff(0).im().rat();
    for (int i = 0; i < d; ++i) {
        c0re *= scale;
        c0im *= scale;
    }
    mpz_class a = c0re.get_num() * (mpz_class(1)), b = c0im.get_num();
    // After scaling these are integers.
    if (c0re.get_den() != 1 || c0im.get_den() != 1) return std::nullopt;
    if (a == 0 && b == 0) return ExactScalar::zero(); // p(0) = 0
    auto divisors = numtheory::gaussian_divisors(a, b);
    if (divisors.size() > 20000) return std::nullopt; // enumeration guard
    for (auto& [dr, di] : divisors) {
        for (int unit = 0; unit < 4; ++unit) {
            mpz_class ur = dr, ui = di;
            switch (unit) {
                case 1: ur = -di; ui = dr; break;  // * i
                case 2: ur = -dr; ui = -di; break; // * -1
                case 3: ur = di; ui = -dr; break;  // * -i
                default: break;
            }
            ExactScalar cand =
                ExactScalar::make(mpq_class(ur, den), 0, mpq_class(ui, den), 0);
            if (is_zero(p.eval(cand))) return cand;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::vector<std::pair<ExactScalar, unsigned>>> roots_in_field(const P& p) {
    if (p.degree() < 1) return std::nullopt;
    P red = p.monic();
    {
        P g = poly_gcd(red, red.derivative());
        if (g.degree() > 0) red = red.divmod(g).first;
    }
    std::vector<ExactScalar> roots;
    P q = red;
    while (q.degree() > 0) {
        if (q.degree() == 1) {
            roots.push_back(-q.coeff(0) / q.coeff(1));
            break;
        }
        if (q.degree() == 2) {
            P m = q.monic();
            auto rr = quadratic_roots(m.coeff(1), m.coeff(0));
            if (!rr) return std::nullopt;
            roots.push_back(rr->first);
            roots.push_back(rr->second);
            break;
        }
        auto r = gaussian_rational_root(q.monic());
        if (!r) return std::nullopt;
        roots.push_back(*r);
        auto [quo, rem] = q.divmod(P{-*r, ExactScalar::one()});
        if (!rem.is_zero()) return std::nullopt;
        q = quo;
    }
    // Multiplicities from the original polynomial.
    std::vector<std::pair<ExactScalar, unsigned>> out;
    P work = p.monic();
    for (auto& r : roots) {
        unsigned m = 0;
        while (true) {
            auto [quo, rem] = work.divmod(P{-r, ExactScalar::one()});
            if (!rem.is_zero()) break;
            work = quo;
            ++m;
        }
        if (m == 0) return std::nullopt;
        out.emplace_back(r, m);
    }
    if (work.degree() != 0) return std::nullopt;
    return out;
}

} // namespace serimat
