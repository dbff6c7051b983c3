#include "doctest.h"

#include <cstdint>

#include <gmp.h>

#include "halfint/arith.hpp"

using namespace halfint;

TEST_CASE("kronecker symbol agrees with the GMP reference on a dense grid") {
    for (long a = -60; a <= 60; ++a) {
        for (long n = -60; n <= 60; ++n) {
            Integer az(a), nz(n);
            const int expected = mpz_kronecker(az.get_mpz_t(), nz.get_mpz_t());
            CHECK(kronecker(a, n) == expected);
            CHECK(kronecker(az, nz) == expected);
        }
    }
}

TEST_CASE("kronecker symbol satisfies the Euler criterion at odd primes") {
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                            29ULL, 31ULL, 37ULL, 41ULL, 43ULL, 47ULL}) {
        for (std::uint64_t a = 1; a < p; ++a) {
            // a^((p-1)/2) mod p, folded to {+1, -1}
            std::uint64_t r = 1, base = a % p, e = (p - 1) / 2;
            while (e) {
                if (e & 1) r = r * base % p;
                base = base * base % p;
                e >>= 1;
            }
            const int euler = (r == 1) ? 1 : -1;
            CHECK(kronecker(static_cast<long>(a), static_cast<long>(p)) == euler);
        }
    }
}

TEST_CASE("kronecker handles the even and negative extensions") {
    CHECK(kronecker(5, 2) == -1);   // 5 = -3 mod 8
    CHECK(kronecker(7, 2) == 1);    // 7 = -1 mod 8
    CHECK(kronecker(2, 2) == 0);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
    CHECK(kronecker(3, 0) == 0);
    CHECK(kronecker(-7, -1) == -1);
    CHECK(kronecker(7, -1) == 1);
}

TEST_CASE("twist character chi1") {
    // even k, t = 1: the symbol (1 | d) is identically 1
    for (int d = 1; d <= 20; ++d) CHECK(chi1(Integer(d), 1, 6) == 1);
    // even k, t = 5: (5 | d)
    CHECK(chi1(Integer(2), 5, 6) == -1);
    CHECK(chi1(Integer(3), 5, 6) == -1);
    CHECK(chi1(Integer(4), 5, 6) == 1);
    CHECK(chi1(Integer(5), 5, 6) == 0);
    CHECK(chi1(Integer(11), 5, 6) == 1);  // 11 = 1 mod 5, residue
    // odd k, t = 1: (-1 | d)
    CHECK(chi1(Integer(3), 1, 7) == -1);
    CHECK(chi1(Integer(5), 1, 7) == 1);
}

TEST_CASE("square-free detection") {
    for (std::uint64_t t : {1ULL, 2ULL, 3ULL, 5ULL, 6ULL, 7ULL, 10ULL, 30ULL, 105ULL})
        CHECK(is_squarefree(t));
    for (std::uint64_t t : {4ULL, 8ULL, 9ULL, 12ULL, 18ULL, 25ULL, 48ULL, 49ULL, 50ULL})
        CHECK_FALSE(is_squarefree(t));
}

TEST_CASE("prime table counts and membership") {
    PrimeTable pt(10000);
    CHECK(pt.limit() == 10000);
    CHECK(pt.count_upto(10) == 4);
    CHECK(pt.count_upto(100) == 25);
    CHECK(pt.count_upto(1000) == 168);
    CHECK(pt.count_upto(10000) == 1229);
    CHECK(pt.primes().front() == 2);
    CHECK(pt.primes().size() == 1229);
    for (std::uint64_t n = 0; n <= 1000; ++n)
        CHECK(pt.is_prime(n) == is_prime_u64(n));
}

TEST_CASE("exact powers") {
    CHECK(pow_ui(Integer(3), 5) == 243);
    CHECK(pow_ui(Integer(-2), 3) == -8);
    CHECK(pow_ui(Integer(7), 0) == 1);
    CHECK(pow_ui(10UL, 6UL) == 1000000);
}
