#pragma once

#include <cstdint>

#include "halfint/hecke.hpp"
#include "halfint/spaces.hpp"

namespace halfint {

// A coefficient scaled into the Sato-Tate window [-1, 1]:
//   value ~ exact / (2 p^{k-1/2}).
// `value` is a long double approximation (>= 64-bit mantissa); `exact` is the
// unscaled coefficient.  Anything decision-like (sign, interval membership)
// must go through the exact comparators below, never through `value`.
struct NormalizedValue {
    long double value = 0.0L;
    std::uint64_t p = 0;
    Rational exact;
    int k = 0;
};

// The coefficient-relation lift: for a form normalized at the square-free
// index t,
//   A(n) = sum_{d | n} chi1(d) d^{k-1} a(t n^2 / d^2),  chi1(d) = ((-1)^k t | d),
// summed over ALL divisors d of n.  The result is an integral-weight-2k,
// level-1 expansion with A(0) = 0, A(1) = a(t) = 1.
//
// Requires f normalized; coefficient n of the output reads a(t n^2), so
// f's precision must exceed t (prec_out - 1)^2 (PrecisionError otherwise).
IntegralForm shimura_lift(const HalfIntegralForm& f, std::size_t prec_out);

// The same divisor sum applied linearly to a raw expansion (no normalization
// demanded): the workhorse for linearity/commutation checks.
QSeries shimura_lift_series(const QSeries& a, int k, std::uint64_t t,
                            std::size_t prec_out);

// Prime coefficient relation: A(p) = a(t p^2) + chi1(p) p^{k-1} a(t) for odd
// primes p.  Requires f normalized (a(t) = 1) and t p^2 within precision.
// The result is asserted integral.
Integer prime_relation(const HalfIntegralForm& f, std::uint64_t p);

// a(t p^{2m}) / a(t) from the Hecke recursion on lift coefficients:
//   A(p^j) = A(p) A(p^{j-1}) - p^{2k-1} A(p^{j-2}),   A(1) = 1,
//   a(t p^{2m})/a(t) = A(p^m) - chi1(p) p^{k-1} A(p^{m-1}).
// Raw version: feed A(p) and chi1(p) directly (the stats pipeline has them
// without deep half-integral expansions).
Integer coeff_tp2m(const Integer& a_p, std::uint64_t p, unsigned m, int k,
                   int chi1_p);
// Convenience version reading A(p) off the form via prime_relation.
Integer coeff_tp2m(const HalfIntegralForm& f, std::uint64_t p, unsigned m);

// C(p) = A(p) / (2 p^{k-1/2}) for an integral form of weight 2k.
NormalizedValue normalized_lift_value(const IntegralForm& F, std::uint64_t p);
// D(p) = a(t p^2) / (2 p^{k-1/2}) for a normalized half-integral form.
NormalizedValue normalized_half_value(const HalfIntegralForm& f, std::uint64_t p);

// Exact sign of  X / (2 p^{k-1/2}) - e  for rational X, e: the square root is
// cleared by squaring, so interval membership of normalized values is decided
// without floating point.
int compare_normalized(const Rational& X, std::uint64_t p, int k, const Rational& e);

// Closed interval membership e_lo <= X/(2 p^{k-1/2}) <= e_hi, exact.
bool normalized_in_interval(const Rational& X, std::uint64_t p, int k,
                            const Rational& e_lo, const Rational& e_hi);

// Recompute the divisor-sum lift on the largest range f's precision supports
// (capped at `max_n`) and compare exactly against `target`'s coefficients.
// Returns the number of coefficients checked (>= 1); throws VerificationError
// on any mismatch.  This is the honesty gate used before a deep series stands
// in for lift(f) in the statistics pipeline.
std::size_t verify_lift_against(const HalfIntegralForm& f, const IntegralForm& target,
                                std::size_t max_n);

} // namespace halfint
