#include "halfint/shimura.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "halfint/arith.hpp"
#include "halfint/errors.hpp"

namespace halfint {

namespace {

// long double from an Integer without double-rounding through mpz_get_d:
// take the top limbs manually.  Good to the full 64-bit mantissa of x87
// long double, which is far more than the displays need.
long double to_long_double(const Integer& z) {
    const int s = mpz_sgn(z.get_mpz_t());
    if (s == 0) return 0.0L;
    const std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 63) {
        // Fits losslessly in a signed 64-bit value.
        return static_cast<long double>(mpz_get_si(z.get_mpz_t()));
    }
    // z = m * 2^shift with m carrying the top <= 128 bits.
    const std::size_t shift = bits > 128 ? bits - 128 : 0;
    Integer m = z >> shift;  // signed shift keeps the sign
    Integer hi = m >> 64;
    Integer lo = m - (hi << 64);
    long double acc = static_cast<long double>(mpz_get_d(hi.get_mpz_t()));
    acc = acc * 18446744073709551616.0L /* 2^64 */ +
          static_cast<long double>(mpz_get_d(lo.get_mpz_t()));
    return std::ldexp(acc, static_cast<int>(shift));
}

long double to_long_double(const Rational& q) {
    return to_long_double(Integer(q.get_num())) / to_long_double(Integer(q.get_den()));
}

void require_normalized(const HalfIntegralForm& f, const char* who) {
    if (!f.normalized || f.t == 0)
        throw std::invalid_argument(std::string(who) +
                                    ": form must be normalized at a square-free index first");
    if (f.coeffs.coeff(f.t) != 1)
        throw std::invalid_argument(std::string(who) + ": normalization is stale (a(t) != 1)");
}

} // namespace

QSeries shimura_lift_series(const QSeries& a, int k, std::uint64_t t,
                            std::size_t prec_out) {
    if (k < 2) throw std::invalid_argument("shimura_lift_series: weight index k must be >= 2");
    if (t == 0 || !is_squarefree(t))
        throw std::invalid_argument("shimura_lift_series: t must be a positive square-free integer");
    if (prec_out < 2) throw std::invalid_argument("shimura_lift_series: need at least 2 coefficients");
    const std::size_t top = t * (prec_out - 1) * (prec_out - 1);
    if (a.precision() <= top)
        throw PrecisionError("shimura_lift_series: need a(t n^2) up to n = " +
                             std::to_string(prec_out - 1) + ", i.e. precision > " +
                             std::to_string(top) + ", have " + std::to_string(a.precision()));

    std::vector<Rational> out(prec_out, Rational(0));
    for (std::size_t n = 1; n < prec_out; ++n) {
        Rational acc(0);
        for (std::uint64_t d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            const std::uint64_t e = n / d;  // the complementary divisor
            // contribution of divisor d
            {
                const int ch = chi1(d, t, k);
                if (ch != 0) {
                    Integer w = pow_ui(Integer(d), static_cast<unsigned long>(k - 1));
                    if (ch < 0) w = -w;
                    acc += Rational(w) * a.coeff(t * e * e);
                }
            }
            if (e != d) {  // contribution of divisor e
                const int ch = chi1(e, t, k);
                if (ch != 0) {
                    Integer w = pow_ui(Integer(e), static_cast<unsigned long>(k - 1));
                    if (ch < 0) w = -w;
                    acc += Rational(w) * a.coeff(t * d * d);
                }
            }
        }
        out[n] = acc;
    }
    return QSeries(std::move(out));
}

IntegralForm shimura_lift(const HalfIntegralForm& f, std::size_t prec_out) {
    require_normalized(f, "shimura_lift");
    QSeries series = shimura_lift_series(f.coeffs, f.k, f.t, prec_out);
    if (series.coeff(1) != 1)
        throw VerificationError("shimura_lift: A(1) != a(t) = 1; divisor sum is inconsistent");
    IntegralForm F;
    F.weight = 2 * f.k;
    F.level = 1;
    F.coeffs = std::move(series);
    F.primitive = true;
    return F;
}

Integer prime_relation(const HalfIntegralForm& f, std::uint64_t p) {
    require_normalized(f, "prime_relation");
    if (p < 3 || !is_prime_u64(p))
        throw std::invalid_argument("prime_relation: p must be an odd prime");
    const std::uint64_t idx = f.t * p * p;
    if (idx >= f.coeffs.precision())
        throw PrecisionError("prime_relation: index t p^2 = " + std::to_string(idx) +
                             " outside precision " + std::to_string(f.coeffs.precision()));
    Rational acc = f.coeffs.coeff(idx);
    const int ch = chi1(p, f.t, f.k);
    if (ch != 0) {
        Integer w = pow_ui(Integer(p), static_cast<unsigned long>(f.k - 1));
        if (ch < 0) w = -w;
        acc += Rational(w);  // times a(t) = 1
    }
    acc.canonicalize();
    if (acc.get_den() != 1)
        throw std::domain_error("prime_relation: A(p) is not integral; the form is not "
                                "integrally normalized");
    return Integer(acc.get_num());
}

Integer coeff_tp2m(const Integer& a_p, std::uint64_t p, unsigned m, int k,
                   int chi1_p) {
    if (k < 2) throw std::invalid_argument("coeff_tp2m: weight index k must be >= 2");
    if (p < 3 || !is_prime_u64(p))
        throw std::invalid_argument("coeff_tp2m: p must be an odd prime");
    if (chi1_p < -1 || chi1_p > 1)
        throw std::invalid_argument("coeff_tp2m: chi1_p must be -1, 0 or 1");
    // A(p^j) by the weight-2k Hecke recursion.
    const Integer p2k1 = pow_ui(Integer(p), static_cast<unsigned long>(2 * k - 1));
    Integer prev(1);         // A(p^0)
    Integer cur = a_p;       // A(p^1)
    if (m == 0) return Integer(1);
    for (unsigned j = 2; j <= m; ++j) {
        Integer next = a_p * cur - p2k1 * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    // a(t p^{2m})/a(t) = A(p^m) - chi1(p) p^{k-1} A(p^{m-1}).
    Integer corr(0);
    if (chi1_p != 0) {
        corr = pow_ui(Integer(p), static_cast<unsigned long>(k - 1)) * prev;
        if (chi1_p < 0) corr = -corr;
    }
    return cur - corr;
}

Integer coeff_tp2m(const HalfIntegralForm& f, std::uint64_t p, unsigned m) {
    const Integer a_p = prime_relation(f, p);
    return coeff_tp2m(a_p, p, m, f.k, chi1(p, f.t, f.k));
}

NormalizedValue normalized_lift_value(const IntegralForm& F, std::uint64_t p) {
    if (F.weight < 4 || F.weight % 2 != 0)
        throw std::invalid_argument("normalized_lift_value: need an even weight >= 4");
    if (!is_prime_u64(p))
        throw std::invalid_argument("normalized_lift_value: p must be prime");
    if (p >= F.coeffs.precision())
        throw PrecisionError("normalized_lift_value: p outside precision");
    NormalizedValue v;
    v.p = p;
    v.k = F.weight / 2;
    v.exact = F.coeffs.coeff(p);
    const long double pd = static_cast<long double>(p);
    v.value = to_long_double(v.exact) /
              (2.0L * std::pow(pd, static_cast<long double>(v.k) - 0.5L));
    return v;
}

NormalizedValue normalized_half_value(const HalfIntegralForm& f, std::uint64_t p) {
    require_normalized(f, "normalized_half_value");
    if (p < 3 || !is_prime_u64(p))
        throw std::invalid_argument("normalized_half_value: p must be an odd prime");
    const std::uint64_t idx = f.t * p * p;
    if (idx >= f.coeffs.precision())
        throw PrecisionError("normalized_half_value: index t p^2 outside precision");
    NormalizedValue v;
    v.p = p;
    v.k = f.k;
    v.exact = f.coeffs.coeff(idx);
    const long double pd = static_cast<long double>(p);
    v.value = to_long_double(v.exact) /
              (2.0L * std::pow(pd, static_cast<long double>(v.k) - 0.5L));
    return v;
}

int compare_normalized(const Rational& X, std::uint64_t p, int k, const Rational& e) {
    if (k < 1) throw std::invalid_argument("compare_normalized: k must be >= 1");
    if (p == 0) throw std::invalid_argument("compare_normalized: p must be positive");
    // X / (2 p^{k-1} sqrt(p))  vs  e
    //   <=>  L := num(X) den(e)   vs   R := 2 num(e) den(X) p^{k-1} sqrt(p)
    // with both denominators positive.  Clear sqrt(p) by comparing signs
    // first, then squares: L^2 vs R^2 = (2 num(e) den(X) p^{k-1})^2 p.
    Integer L = Integer(X.get_num()) * Integer(e.get_den());
    Integer Rbase = 2 * Integer(e.get_num()) * Integer(X.get_den()) *
                    pow_ui(Integer(p), static_cast<unsigned long>(k - 1));
    const int sL = sign(L), sR = sign(Rbase);
    if (sL != sR) {
        if (sL == 0) return -sR;   // 0 vs nonzero R
        if (sR == 0) return sL;    // nonzero L vs 0
        return sL;                 // strictly opposite signs
    }
    if (sL == 0) return 0;  // both zero
    // Same nonzero sign s: L - R has the sign of s * (L^2 - R^2).
    Integer diff = L * L - Rbase * Rbase * Integer(static_cast<unsigned long>(p));
    return sL * sign(diff);
}

bool normalized_in_interval(const Rational& X, std::uint64_t p, int k,
                            const Rational& e_lo, const Rational& e_hi) {
    if (e_lo > e_hi)
        throw std::invalid_argument("normalized_in_interval: empty interval");
    return compare_normalized(X, p, k, e_lo) >= 0 &&
           compare_normalized(X, p, k, e_hi) <= 0;
}

std::size_t verify_lift_against(const HalfIntegralForm& f, const IntegralForm& target,
                                std::size_t max_n) {
    require_normalized(f, "verify_lift_against");
    if (target.weight != 2 * f.k)
        throw VerificationError("verify_lift_against: weight mismatch (" +
                                std::to_string(target.weight) + " vs expected " +
                                std::to_string(2 * f.k) + ")");
    // Largest n with t n^2 < f.prec and n < target.prec.
    std::size_t n_max = 1;
    while ((n_max + 1) <= max_n &&
           f.t * (n_max + 1) * (n_max + 1) < f.coeffs.precision() &&
           (n_max + 1) < target.coeffs.precision())
        ++n_max;
    if (n_max < 1)
        throw PrecisionError("verify_lift_against: no overlap to check");
    QSeries mine = shimura_lift_series(f.coeffs, f.k, f.t, n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (mine.coeff(n) != target.coeffs.coeff(n))
            throw VerificationError(
                "verify_lift_against: lift coefficient mismatch at n = " + std::to_string(n) +
                ": recomputed " + mine.coeff(n).get_str() + ", supplied " +
                target.coeffs.coeff(n).get_str());
    }
    return n_max;
}

} // namespace halfint
