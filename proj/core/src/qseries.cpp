#include "halfint/qseries.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "halfint/errors.hpp"

namespace halfint {

namespace {

void require_positive_precision(std::size_t p) {
    if (p == 0)
        throw std::invalid_argument("QSeries: precision must be >= 1");
}

} // namespace

QSeries::QSeries(std::size_t precision) : coeffs_(precision) {
    require_positive_precision(precision);
}

QSeries::QSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    require_positive_precision(coeffs_.size());
}

const Rational& QSeries::coeff(std::size_t n) const {
    if (n >= coeffs_.size())
        throw PrecisionError("QSeries::coeff: index " + std::to_string(n) +
                             " >= precision " + std::to_string(coeffs_.size()));
    return coeffs_[n];
}

void QSeries::set_coeff(std::size_t n, Rational value) {
    if (n >= coeffs_.size())
        throw PrecisionError("QSeries::set_coeff: index " + std::to_string(n) +
                             " >= precision " + std::to_string(coeffs_.size()));
    coeffs_[n] = std::move(value);
}

bool QSeries::is_zero() const {
    for (const auto& c : coeffs_)
        if (sgn(c) != 0) return false;
    return true;
}

bool QSeries::integral() const {
    for (const auto& c : coeffs_)
        if (cmp(c.get_den(), 1) != 0) return false;
    return true;
}

std::size_t QSeries::nonzero_count() const {
    std::size_t n = 0;
    for (const auto& c : coeffs_)
        if (sgn(c) != 0) ++n;
    return n;
}

std::optional<std::size_t> QSeries::leading_index() const {
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
        if (sgn(coeffs_[n]) != 0) return n;
    return std::nullopt;
}

QSeries QSeries::truncated(std::size_t prec) const {
    require_positive_precision(prec);
    if (prec > coeffs_.size())
        throw PrecisionError("QSeries::truncated: cannot extend precision from " +
                             std::to_string(coeffs_.size()) + " to " + std::to_string(prec));
    return QSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + prec));
}

bool QSeries::agree_on_overlap(const QSeries& a, const QSeries& b) {
    const std::size_t p = std::min(a.precision(), b.precision());
    for (std::size_t n = 0; n < p; ++n)
        if (cmp(a.coeffs_[n], b.coeffs_[n]) != 0) return false;
    return true;
}

QSeries QSeries::operator-() const {
    QSeries r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
    const std::size_t p = std::min(a.precision(), b.precision());
    QSeries r(p);
    for (std::size_t n = 0; n < p; ++n) r.coeffs_[n] = a.coeffs_[n] + b.coeffs_[n];
    return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) {
    const std::size_t p = std::min(a.precision(), b.precision());
    QSeries r(p);
    for (std::size_t n = 0; n < p; ++n) r.coeffs_[n] = a.coeffs_[n] - b.coeffs_[n];
    return r;
}

namespace {

std::vector<std::size_t> nonzero_indices(const std::vector<Rational>& v, std::size_t upto) {
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < upto; ++n)
        if (sgn(v[n]) != 0) idx.push_back(n);
    return idx;
}

bool all_integral(const std::vector<Rational>& v, std::size_t upto) {
    for (std::size_t n = 0; n < upto; ++n)
        if (cmp(v[n].get_den(), 1) != 0) return false;
    return true;
}

} // namespace

QSeries operator*(const QSeries& a, const QSeries& b) {
    const std::size_t p = std::min(a.precision(), b.precision());
    const auto& av = a.coeffs_;
    const auto& bv = b.coeffs_;

    // Outer loop over the sparser factor.
    auto ia = nonzero_indices(av, p);
    auto ib = nonzero_indices(bv, p);
    const bool a_outer = ia.size() <= ib.size();
    const auto& outer_idx = a_outer ? ia : ib;
    const auto& inner_idx = a_outer ? ib : ia;
    const auto& outer = a_outer ? av : bv;
    const auto& inner = a_outer ? bv : av;

    if (all_integral(av, p) && all_integral(bv, p)) {
        std::vector<Integer> acc(p);
        for (std::size_t i : outer_idx) {
            const mpz_srcptr oi = outer[i].get_num().get_mpz_t();
            for (std::size_t j : inner_idx) {
                if (i + j >= p) break;
                mpz_addmul(acc[i + j].get_mpz_t(), oi, inner[j].get_num().get_mpz_t());
            }
        }
        std::vector<Rational> out(p);
        for (std::size_t n = 0; n < p; ++n) out[n] = Rational(acc[n]);
        return QSeries(std::move(out));
    }

    std::vector<Rational> out(p);
    Rational tmp;
    for (std::size_t i : outer_idx) {
        for (std::size_t j : inner_idx) {
            if (i + j >= p) break;
            tmp = outer[i] * inner[j];
            out[i + j] += tmp;
        }
    }
    return QSeries(std::move(out));
}

QSeries& QSeries::operator*=(const Rational& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
}

QSeries& QSeries::operator/=(const Rational& c) {
    if (sgn(c) == 0)
        throw std::invalid_argument("QSeries: division by zero scalar");
    for (auto& x : coeffs_) x /= c;
    return *this;
}

QSeries QSeries::shifted_up(std::size_t offset) const {
    QSeries r(coeffs_.size());
    for (std::size_t n = offset; n < coeffs_.size(); ++n)
        r.coeffs_[n] = coeffs_[n - offset];
    return r;
}

void QSeries::dump(std::ostream& os) const {
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
        os << n << '\t' << coeffs_[n].get_str() << '\n';
}

QSeries pow(const QSeries& base, unsigned e) {
    QSeries result(base.precision());
    result.set_coeff(0, 1);
    if (e == 0) return result;
    QSeries sq = base;
    for (;;) {
        if (e & 1u) result = result * sq;
        e >>= 1u;
        if (e == 0) break;
        sq = sq * sq;
    }
    return result;
}

QSeries theta_series(std::size_t prec) {
    QSeries t(prec);
    t.set_coeff(0, 1);
    for (std::size_t m = 1; m * m < prec; ++m) t.set_coeff(m * m, 2);
    return t;
}

QSeries f2_series(std::size_t prec) {
    // sigma_1 over odd n only: every divisor of odd n is odd, so sieve odd
    // multiples of each odd d.
    std::vector<Integer> acc(prec);
    for (std::size_t d = 1; d < prec; d += 2)
        for (std::size_t n = d; n < prec; n += 2 * d)
            acc[n] += static_cast<unsigned long>(d);
    std::vector<Rational> out(prec);
    for (std::size_t n = 1; n < prec; n += 2) out[n] = Rational(acc[n]);
    return QSeries(std::move(out));
}

Rational bernoulli(unsigned n) {
    // B_m via sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
    std::vector<Rational> b(n + 1);
    b[0] = 1;
    Integer binom;
    for (unsigned m = 1; m <= n; ++m) {
        Rational acc(0);
        for (unsigned j = 0; j < m; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
            acc += Rational(binom) * b[j];
        }
        b[m] = -acc / Rational(static_cast<unsigned long>(m) + 1);
    }
    return b[n];
}

QSeries eisenstein_series(int weight, std::size_t prec) {
    if (weight < 4 || weight % 2 != 0)
        throw std::invalid_argument("eisenstein_series: weight must be even and >= 4");
    const Rational c = Rational(-2 * weight) / bernoulli(static_cast<unsigned>(weight));
    std::vector<Integer> acc(prec);
    for (std::size_t d = 1; d < prec; ++d) {
        const Integer dp = pow_ui(static_cast<unsigned long>(d),
                                  static_cast<unsigned long>(weight - 1));
        for (std::size_t n = d; n < prec; n += d) acc[n] += dp;
    }
    std::vector<Rational> out(prec);
    out[0] = 1;
    for (std::size_t n = 1; n < prec; ++n) out[n] = c * Rational(acc[n]);
    return QSeries(std::move(out));
}

QSeries delta_series(std::size_t prec) {
    if (prec < 2)
        throw std::invalid_argument("delta_series: precision must be >= 2");
    // eta^3's exponent support below prec-1 (we shift by one at the end).
    const std::size_t inner = prec - 1;
    struct Term { std::size_t e; long c; };
    std::vector<Term> eta3;
    for (std::size_t m = 0;; ++m) {
        const std::size_t e = m * (m + 1) / 2;
        if (e >= inner) break;
        const long sgn_m = (m % 2 == 0) ? 1 : -1;
        eta3.push_back({e, sgn_m * static_cast<long>(2 * m + 1)});
    }

    std::vector<Integer> cur(inner);
    cur[0] = 1;
    std::vector<Integer> next(inner);
    for (int fold = 0; fold < 8; ++fold) {
        for (auto& x : next) x = 0;
        for (const Term& t : eta3) {
            if (t.c >= 0) {
                const unsigned long c = static_cast<unsigned long>(t.c);
                for (std::size_t n = 0; n + t.e < inner; ++n)
                    mpz_addmul_ui(next[n + t.e].get_mpz_t(), cur[n].get_mpz_t(), c);
            } else {
                const unsigned long c = static_cast<unsigned long>(-t.c);
                for (std::size_t n = 0; n + t.e < inner; ++n)
                    mpz_submul_ui(next[n + t.e].get_mpz_t(), cur[n].get_mpz_t(), c);
            }
        }
        std::swap(cur, next);
    }

    std::vector<Rational> out(prec);
    for (std::size_t n = 0; n < inner; ++n) out[n + 1] = Rational(cur[n]);
    return QSeries(std::move(out));
}

QSeries level1_cusp_eigenform(int weight, std::size_t prec) {
    int a = 0, b = 0;
    switch (weight) {
        case 12: a = 0; b = 0; break;
        case 16: a = 1; b = 0; break;
        case 18: a = 0; b = 1; break;
        case 20: a = 2; b = 0; break;
        case 22: a = 1; b = 1; break;
        case 26: a = 2; b = 1; break;
        default:
            throw std::invalid_argument(
                "level1_cusp_eigenform: level-1 cusp space is not one-dimensional "
                "in weight " + std::to_string(weight));
    }
    QSeries f = delta_series(prec);
    if (a > 0) f = f * pow(eisenstein_series(4, prec), static_cast<unsigned>(a));
    if (b > 0) f = f * pow(eisenstein_series(6, prec), static_cast<unsigned>(b));
    return f;
}

} // namespace halfint
