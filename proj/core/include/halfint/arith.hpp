#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace halfint {

// Exact scalars.  All arithmetic that decides a mathematical statement
// (sign, equality, interval membership) happens in these types; doubles
// only ever appear in reported ratios and the Monte Carlo oracle.
using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Integer& x) { return sgn(x); }
inline int sign(const Rational& x) { return sgn(x); }

// x^e for e >= 0.
Integer pow_ui(const Integer& base, unsigned long e);
Integer pow_ui(unsigned long base, unsigned long e);

// Kronecker symbol (a|n) with the full classical extension:
//   * multiplicative in n, (a|1) = 1, (a|0) = [|a| = 1]
//   * (a|2) = 0 for even a, +1 for a = ±1 mod 8, -1 for a = ±3 mod 8
//   * (a|-1) = sign of a (with (0|-1) = 1 by the empty-product convention)
// Agrees with the Jacobi symbol for odd positive n and with the Legendre
// symbol for odd prime n.
int kronecker(const Integer& a, const Integer& n);
int kronecker(long a, long n);

// The twist character of the coefficient relations: chi1(d) = ((-1)^k t | d).
// The full Kronecker extension means no special-casing of even d in divisor
// sums: the symbol itself handles (and never silently zeroes) those terms.
// Requires d >= 1 and square-free t >= 1.
int chi1(const Integer& d, std::uint64_t t, int k);

bool is_squarefree(std::uint64_t t);

// Plain Eratosthenes table of all primes <= limit, with counting helpers.
class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }

    // pi(x): number of primes <= x.  Requires x <= limit().
    std::uint64_t count_upto(std::uint64_t x) const;

    bool is_prime(std::uint64_t n) const; // requires n <= limit()

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
};

// Convenience: primality by trial division, no table needed.
bool is_prime_u64(std::uint64_t n);

} // namespace halfint
