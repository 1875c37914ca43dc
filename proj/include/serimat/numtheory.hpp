#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace serimat::numtheory {

// Prime factorization of n > 0, trial division plus Pollard rho.
std::vector<std::pair<mpz_class, unsigned>> factor(mpz_class n);

// Exact nonnegative square root of a rational, if it is a perfect square.
std::optional<mpq_class> sqrt_rational(const mpq_class& q);

// x^2 + y^2 = n over Z, n >= 0, if representable.
std::optional<std::pair<mpz_class, mpz_class>> two_squares(const mpz_class& n);

// x^2 + 2 y^2 = n over Z, n >= 0, if representable.
std::optional<std::pair<mpz_class, mpz_class>> square_plus_two_square(const mpz_class& n);

// Rational variants (x, y rational, q >= 0).
std::optional<std::pair<mpq_class, mpq_class>> two_squares_rational(const mpq_class& q);
std::optional<std::pair<mpq_class, mpq_class>> square_plus_two_square_rational(const mpq_class& q);

// All divisors of the Gaussian integer a + bi up to unit multiples
// ({1, i, -1, -i}), as (re, im) pairs. Requires a + bi != 0.
std::vector<std::pair<mpz_class, mpz_class>> gaussian_divisors(const mpz_class& a,
                                                               const mpz_class& b);

} // namespace serimat::numtheory
