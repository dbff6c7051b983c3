#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "halfint/arith.hpp"

namespace halfint {

// Truncated power series in q with exact rational coefficients.
// precision() = P means coefficients of q^0 .. q^{P-1} are stored and exact.
// No operation ever increases precision; binary operations truncate to the
// smaller operand's precision.
class QSeries {
public:
    // Empty series (precision 0): the before-assignment placeholder state.
    QSeries() = default;
    // Zero series of the given precision (>= 1).
    explicit QSeries(std::size_t precision);
    explicit QSeries(std::vector<Rational> coeffs);

    std::size_t precision() const { return coeffs_.size(); }

    // Coefficient of q^n; throws PrecisionError for n >= precision().
    const Rational& coeff(std::size_t n) const;
    void set_coeff(std::size_t n, Rational value);

    bool is_zero() const;
    bool integral() const; // every coefficient has denominator 1
    std::size_t nonzero_count() const;
    // Least n with coeff(n) != 0, if any.
    std::optional<std::size_t> leading_index() const;

    // Copy truncated to a smaller precision (throws PrecisionError if prec
    // exceeds the current precision — truncation never invents data).
    QSeries truncated(std::size_t prec) const;

    bool operator==(const QSeries& o) const = default;
    // True when the two series agree on min(precision) coefficients.
    static bool agree_on_overlap(const QSeries& a, const QSeries& b);

    QSeries operator-() const;
    friend QSeries operator+(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a, const QSeries& b);
    // Truncated Cauchy product at min(precision).  Integer-only operands take
    // an mpz fast path; the sparser factor drives the outer loop, so products
    // against theta-like series cost O(P * sqrt(P)).
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    QSeries& operator*=(const Rational& c);
    QSeries& operator/=(const Rational& c); // c != 0

    // q^offset * this, keeping the same precision (top coefficients fall off).
    QSeries shifted_up(std::size_t offset) const;

    // One line per stored coefficient: "n<TAB>value", value in exact rational
    // text (lowest terms, "7" or "-7/3").
    void dump(std::ostream& os) const;

    const std::vector<Rational>& data() const { return coeffs_; }

private:
    std::vector<Rational> coeffs_;
};

QSeries pow(const QSeries& base, unsigned e); // e >= 0; precision preserved

// theta(q) = 1 + 2 sum_{m>=1} q^{m^2}: weight-1/2 generator.
QSeries theta_series(std::size_t prec);
// F(q) = sum_{n odd} sigma_1(n) q^n: the weight-2 generator.
QSeries f2_series(std::size_t prec);

// Exact Bernoulli number B_n (B_1 = -1/2 convention).
Rational bernoulli(unsigned n);
// Level-1 Eisenstein series E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n,
// even w >= 4.
QSeries eisenstein_series(int weight, std::size_t prec);

// Discriminant cusp form: q prod (1-q^n)^24, built as q * (eta^3)^8 from the
// sparse cube expansion sum (-1)^m (2m+1) q^{m(m+1)/2}.
QSeries delta_series(std::size_t prec);

// The normalized cusp eigenform of level 1 in weights where the cusp space is
// one-dimensional (12, 16, 18, 20, 22, 26): Delta * E4^a * E6^b.
QSeries level1_cusp_eigenform(int weight, std::size_t prec);

} // namespace halfint
