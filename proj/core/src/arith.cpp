#include "halfint/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace halfint {

Integer pow_ui(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Integer pow_ui(unsigned long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

namespace {

// (a|2) for the Kronecker extension.
int kronecker_two(const Integer& a) {
    if (mpz_even_p(a.get_mpz_t())) return 0;
    const unsigned long m = mpz_fdiv_ui(a.get_mpz_t(), 8); // a mod 8 in [0,8)
    return (m == 1 || m == 7) ? 1 : -1;
}

} // namespace

int kronecker(const Integer& a, const Integer& n) {
    if (sgn(n) == 0) return (cmp(abs(a), 1) == 0) ? 1 : 0;

    int result = 1;
    Integer nn = n;
    if (sgn(nn) < 0) {
        nn = -nn;
        if (sgn(a) < 0) result = -result; // (a|-1) = sign a
    }

    // Split off the even part of n: (a|2)^v2(n).
    if (mpz_even_p(nn.get_mpz_t())) {
        const int two = kronecker_two(a);
        if (two == 0) return 0;
        const auto v2 = mpz_scan1(nn.get_mpz_t(), 0);
        if ((v2 & 1) != 0 && two == -1) result = -result;
        mpz_fdiv_q_2exp(nn.get_mpz_t(), nn.get_mpz_t(), v2);
    }
    if (cmp(nn, 1) == 0) return result;

    // nn is now odd and >= 3: classic Jacobi reciprocity loop.
    Integer aa = a;
    mpz_fdiv_r(aa.get_mpz_t(), aa.get_mpz_t(), nn.get_mpz_t()); // aa in [0, nn)
    while (sgn(aa) != 0) {
        const auto v2 = mpz_scan1(aa.get_mpz_t(), 0);
        if (v2 > 0) {
            mpz_fdiv_q_2exp(aa.get_mpz_t(), aa.get_mpz_t(), v2);
            if ((v2 & 1) != 0) {
                const unsigned long m = mpz_fdiv_ui(nn.get_mpz_t(), 8);
                if (m == 3 || m == 5) result = -result;
            }
        }
        // Both odd now; quadratic reciprocity.
        if (mpz_fdiv_ui(aa.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(nn.get_mpz_t(), 4) == 3)
            result = -result;
        swap(aa, nn);
        mpz_fdiv_r(aa.get_mpz_t(), aa.get_mpz_t(), nn.get_mpz_t());
    }
    return (cmp(nn, 1) == 0) ? result : 0;
}

int kronecker(long a, long n) {
    return kronecker(Integer(a), Integer(n));
}

int chi1(const Integer& d, std::uint64_t t, int k) {
    if (sgn(d) < 1)
        throw std::invalid_argument("chi1: d must be >= 1");
    if (t == 0 || !is_squarefree(t))
        throw std::invalid_argument("chi1: t must be a positive square-free integer");
    Integer top(static_cast<unsigned long>(t));
    if (k % 2 != 0) top = -top;
    return kronecker(top, d);
}

bool is_squarefree(std::uint64_t t) {
    if (t == 0) return false;
    for (std::uint64_t d = 2; d * d <= t; ++d) {
        if (t % (d * d) == 0) return false;
    }
    return true;
}

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2)
        throw std::invalid_argument("PrimeTable: limit must be >= 2");
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
    for (std::uint64_t p = 2; p <= limit; ++p)
        if (!composite[p]) primes_.push_back(p);
}

std::uint64_t PrimeTable::count_upto(std::uint64_t x) const {
    if (x > limit_)
        throw std::invalid_argument("PrimeTable::count_upto: x exceeds table limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
    return static_cast<std::uint64_t>(it - primes_.begin());
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > limit_)
        throw std::invalid_argument("PrimeTable::is_prime: n exceeds table limit");
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

} // namespace halfint
