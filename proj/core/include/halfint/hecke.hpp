#pragma once

#include <cstdint>

#include "halfint/spaces.hpp"

namespace halfint {

// An integral-weight form (level 1 here), exact q-expansion.
struct IntegralForm {
    int weight = 0;
    int level = 1;
    QSeries coeffs;
    bool primitive = false; // normalized eigenform: coeff(1) = 1

    IntegralForm() : coeffs(1) {}
    IntegralForm(int w, QSeries c) : weight(w), coeffs(std::move(c)) {}

    // Coefficient as an exact integer; throws if it is not integral.
    Integer coeff_int(std::size_t n) const;
};

// Hecke operator T_{p^2} on forms of weight k + 1/2 on Gamma_0(4), p an odd
// prime:
//   (T f)(n) = a(p^2 n) + ((-1)^k n | p) p^{k-1} a(n) + p^{2k-1} a(n / p^2),
// the last term only when p^2 | n.  Requires f precision >= p^2; the result
// has precision floor(prec / p^2) and throws PrecisionError if that is < 2.
// Plus-space support is preserved (p^2 = 1 mod 4, so indices keep their
// residue class); construction records do not transport and are cleared.
HalfIntegralForm tp2_half(const HalfIntegralForm& f, std::uint64_t p);

// Hecke operator T_p on integral weight w forms of level 1:
//   (T F)(n) = A(p n) + p^{w-1} A(n / p)  (second term only when p | n).
// Result precision floor(prec / p); throws PrecisionError if that is < 2.
IntegralForm tp_integral(const IntegralForm& F, std::uint64_t p);

} // namespace halfint
