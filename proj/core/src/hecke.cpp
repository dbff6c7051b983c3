#include "halfint/hecke.hpp"

#include <stdexcept>
#include <string>

#include "halfint/errors.hpp"

namespace halfint {

Integer IntegralForm::coeff_int(std::size_t n) const {
    const Rational& c = coeffs.coeff(n);
    if (cmp(c.get_den(), 1) != 0)
        throw std::domain_error("IntegralForm::coeff_int: coefficient of q^" +
                                std::to_string(n) + " is not an integer");
    return c.get_num();
}

HalfIntegralForm tp2_half(const HalfIntegralForm& f, std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("tp2_half: p must be an odd prime");
    const std::size_t prec = f.coeffs.precision();
    const std::uint64_t p2 = p * p;
    if (prec < p2)
        throw PrecisionError("tp2_half: input precision " + std::to_string(prec) +
                             " is below p^2 = " + std::to_string(p2));
    const std::size_t out_prec = prec / p2;
    if (out_prec < 2)
        throw PrecisionError("tp2_half: result precision would be " +
                             std::to_string(out_prec) + " (< 2); precision exhausted");

    const Integer pk1 = pow_ui(p, static_cast<unsigned long>(f.k - 1));
    const Integer p2k1 = pow_ui(p, static_cast<unsigned long>(2 * f.k - 1));
    const Integer pz(static_cast<unsigned long>(p));

    QSeries out(out_prec);
    for (std::size_t n = 0; n < out_prec; ++n) {
        Rational c = f.coeffs.coeff(p2 * n);
        Integer twisted(static_cast<unsigned long>(n));
        if (f.k % 2 != 0) twisted = -twisted;
        const int chi = kronecker(twisted, pz);
        if (chi != 0) {
            Rational mid = f.coeffs.coeff(n) * Rational(pk1);
            c += (chi > 0) ? mid : -mid;
        }
        if (n % p2 == 0)
            c += f.coeffs.coeff(n / p2) * Rational(p2k1);
        out.set_coeff(n, std::move(c));
    }

    HalfIntegralForm r;
    r.k = f.k;
    r.level = f.level;
    r.coeffs = std::move(out);
    r.plus_space = f.plus_space;
    r.cusp = f.cusp;
    return r;
}

IntegralForm tp_integral(const IntegralForm& F, std::uint64_t p) {
    if (p < 2 || !is_prime_u64(p))
        throw std::invalid_argument("tp_integral: p must be prime");
    const std::size_t prec = F.coeffs.precision();
    if (prec < p)
        throw PrecisionError("tp_integral: input precision " + std::to_string(prec) +
                             " is below p = " + std::to_string(p));
    const std::size_t out_prec = prec / p;
    if (out_prec < 2)
        throw PrecisionError("tp_integral: result precision would be " +
                             std::to_string(out_prec) + " (< 2); precision exhausted");

    const Integer pw1 = pow_ui(p, static_cast<unsigned long>(F.weight - 1));

    QSeries out(out_prec);
    for (std::size_t n = 0; n < out_prec; ++n) {
        Rational c = F.coeffs.coeff(p * n);
        if (n % p == 0)
            c += F.coeffs.coeff(n / p) * Rational(pw1);
        out.set_coeff(n, std::move(c));
    }

    IntegralForm r(F.weight, std::move(out));
    r.level = F.level;
    return r;
}

} // namespace halfint
