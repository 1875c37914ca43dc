#include "serimat/numtheory.hpp"

#include <algorithm>
#include <map>

namespace serimat::numtheory {

namespace {

mpz_class pollard_rho(const mpz_class& n) {
    // Brent variant; n must be composite, odd, > 1.
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEEul);
    while (true) {
        mpz_class y = rng.get_z_range(n - 2) + 1;
        mpz_class c = rng.get_z_range(n - 2) + 1;
        mpz_class x = y, d = 1, q = 1, ys = y;
        const unsigned m = 128;
        unsigned r = 1;
        while (d == 1) {
            x = y;
            for (unsigned i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned k = 0;
            while (k < r && d == 1) {
                ys = y;
                for (unsigned i = 0; i < std::min(m, r - k); ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (d != n) return d;
    }
}

void factor_into(mpz_class n, std::map<mpz_class, unsigned>& out) {
    if (n <= 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32) != 0) {
        ++out[n];
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

// t with t^2 == -d (mod p) for odd prime p, by exhaustive search over small
// witnesses; p here always comes from inputs of modest size.
std::optional<mpz_class> sqrt_mod_minus(const mpz_class& p, unsigned d) {
    mpz_class target = (p - d) % p;
    if (target < 0) target += p;
    // Tonelli-Shanks via mpz powm on candidates g^((p-1)/4)-style shortcuts is
    // overkill; use the generic algorithm below.
    // Euler criterion first.
    mpz_class leg;
    mpz_powm(leg.get_mpz_t(), target.get_mpz_t(), mpz_class((p - 1) / 2).get_mpz_t(),
             p.get_mpz_t());
    if (leg != 1) return std::nullopt;
    if (p % 4 == 3) {
        mpz_class r;
        mpz_powm(r.get_mpz_t(), target.get_mpz_t(), mpz_class((p + 1) / 4).get_mpz_t(),
                 p.get_mpz_t());
        return r;
    }
    // Tonelli-Shanks.
    mpz_class q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    mpz_class z = 2;
    while (true) {
        mpz_class e;
        mpz_powm(e.get_mpz_t(), z.get_mpz_t(), mpz_class((p - 1) / 2).get_mpz_t(), p.get_mpz_t());
        if (e == p - 1) break;
        ++z;
    }
    mpz_class m = s, c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), target.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), target.get_mpz_t(), mpz_class((q + 1) / 2).get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        mpz_class tt = t;
        unsigned i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        mpz_class b = c;
        for (unsigned j = 0; j + i + 1 < mpz_get_ui(m.get_mpz_t()); ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

// Cornacchia: x^2 + d y^2 = p for prime p with -d a QR mod p.
std::optional<std::pair<mpz_class, mpz_class>> cornacchia(const mpz_class& p, unsigned d) {
    if (p == 2) {
        if (d == 1) return std::make_pair(mpz_class(1), mpz_class(1));
        if (d == 2) return std::make_pair(mpz_class(0), mpz_class(1));
        return std::nullopt;
    }
    auto t0 = sqrt_mod_minus(p, d);
    if (!t0) return std::nullopt;
    mpz_class t = *t0;
    if (t * 2 < p) t = p - t; // want the larger representative
    mpz_class a = p, b = t;
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), p.get_mpz_t());
    while (b > bound) {
        mpz_class r = a % b;
        a = b;
        b = r;
    }
    mpz_class rem = p - b * b;
    if (rem % d != 0) return std::nullopt;
    mpz_class y2 = rem / d;
    if (mpz_perfect_square_p(y2.get_mpz_t()) == 0) return std::nullopt;
    mpz_class y;
    mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
    return std::make_pair(b, y);
}

} // namespace

std::vector<std::pair<mpz_class, unsigned>> factor(mpz_class n) {
    std::map<mpz_class, unsigned> acc;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
        while (n % p == 0) {
            ++acc[mpz_class(p)];
            n /= p;
        }
    }
    // Trial division with a 6k +- 1 wheel up to 10^4 before handing off to rho.
    for (long p = 53; p < 10000 && n > 1; p += 2) {
        while (n % p == 0) {
            ++acc[mpz_class(p)];
            n /= p;
        }
    }
    if (n > 1) factor_into(n, acc);
    return {acc.begin(), acc.end()};
}

std::optional<mpq_class> sqrt_rational(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
        mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn, rd);
}

namespace {

// Multiply representations in Z[sqrt(-d)]: (a+b w)(c+e w) with w^2 = -d.
std::pair<mpz_class, mpz_class> mul_rep(const std::pair<mpz_class, mpz_class>& u,
                                        const std::pair<mpz_class, mpz_class>& v, unsigned d) {
    return {u.first * v.first - mpz_class(d) * u.second * v.second,
            u.first * v.second + u.second * v.first};
}

std::optional<std::pair<mpz_class, mpz_class>> norm_form(const mpz_class& n, unsigned d) {
    if (n < 0) return std::nullopt;
    if (n == 0) return std::make_pair(mpz_class(0), mpz_class(0));
    std::pair<mpz_class, mpz_class> acc{1, 0};
    for (auto& [p, e] : factor(n)) {
        bool splits;
        if (d == 1)
            splits = (p == 2) || (p % 4 == 1);
        else
            splits = (p == 2) || (p % 8 == 1) || (p % 8 == 3);
        if (splits) {
            auto rep = cornacchia(p, d);
            if (!rep) return std::nullopt;
            for (unsigned i = 0; i < e; ++i) acc = mul_rep(acc, *rep, d);
        } else {
            if (e % 2 != 0) return std::nullopt;
            mpz_class pk = 1;
            for (unsigned i = 0; i < e / 2; ++i) pk *= p;
            acc = mul_rep(acc, {pk, 0}, d);
        }
    }
    acc.first = abs(acc.first);
    acc.second = abs(acc.second);
    return acc;
}

} // namespace

std::optional<std::pair<mpz_class, mpz_class>> two_squares(const mpz_class& n) {
    return norm_form(n, 1);
}

std::optional<std::pair<mpz_class, mpz_class>> square_plus_two_square(const mpz_class& n) {
    return norm_form(n, 2);
}

namespace {
std::pair<mpq_class, mpq_class> scale_pair(const std::pair<mpz_class, mpz_class>& r,
                                           const mpz_class& den) {
    mpq_class x(r.first, den), y(r.second, den);
    x.canonicalize();
    y.canonicalize();
    return {x, y};
}
} // namespace

std::optional<std::pair<mpq_class, mpq_class>> two_squares_rational(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num() * q.get_den();
    auto r = two_squares(n);
    if (!r) return std::nullopt;
    return scale_pair(*r, q.get_den());
}

std::optional<std::pair<mpq_class, mpq_class>> square_plus_two_square_rational(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num() * q.get_den();
    auto r = square_plus_two_square(n);
    if (!r) return std::nullopt;
    return scale_pair(*r, q.get_den());
}

std::vector<std::pair<mpz_class, mpz_class>> gaussian_divisors(const mpz_class& a,
                                                               const mpz_class& b) {
    // Factor a+bi into Gaussian primes via the norm, then enumerate products.
    struct GPrime {
        mpz_class re, im;
        unsigned exp;
    };
    std::vector<GPrime> primes;
    mpz_class ra = a, rb = b;

    auto divide_out = [&](const mpz_class& pre, const mpz_class& pim) {
        // Exact division test in Z[i]: (ra+rb i)/(pre+pim i).
        unsigned count = 0;
        mpz_class nrm = pre * pre + pim * pim;
        while (true) {
            mpz_class nre = ra * pre + rb * pim;
            mpz_class nim = rb * pre - ra * pim;
            if (nre % nrm != 0 || nim % nrm != 0) break;
            ra = nre / nrm;
            rb = nim / nrm;
            ++count;
        }
        return count;
    };

    mpz_class norm = a * a + b * b;
    for (auto& [p, e] : factor(norm)) {
        (void)e;
        if (p == 2) {
            unsigned c = divide_out(1, 1);
            if (c) primes.push_back({1, 1, c});
        } else if (p % 4 == 1) {
            auto rep = cornacchia(p, 1);
            unsigned c1 = divide_out(rep->first, rep->second);
            if (c1) primes.push_back({rep->first, rep->second, c1});
            unsigned c2 = divide_out(rep->first, -rep->second);
            if (c2) primes.push_back({rep->first, -rep->second, c2});
        } else {
            unsigned c = divide_out(p, 0);
            if (c) primes.push_back({p, 0, c});
        }
    }

    std::vector<std::pair<mpz_class, mpz_class>> divs{{1, 0}};
    for (auto& gp : primes) {
        std::vector<std::pair<mpz_class, mpz_class>> next;
        std::pair<mpz_class, mpz_class> pw{1, 0};
        for (unsigned k = 0; k <= gp.exp; ++k) {
            for (auto& d : divs)
                next.emplace_back(d.first * pw.first - d.second * pw.second,
                                  d.first * pw.second + d.second * pw.first);
            pw = {pw.first * gp.re - pw.second * gp.im, pw.first * gp.im + pw.second * gp.re};
        }
        divs = std::move(next);
    }
    return divs;
}

} // namespace serimat::numtheory
