#pragma once

#include "halfint/spaces.hpp"

namespace halfint::detail {

// True for the weights whose forms can be re-expanded through the
// structure-constant fast path (k = 6 and k = 8).
bool fast_expand_supported(int k);

// Re-expand theta^a F^b combinations of weight k + 1/2 at large precision in
// O(P sqrt(P)) word operations instead of the O(P^2) direct product route.
//
// Every monomial has odd theta-exponent, so the form is theta * (inner) with
// inner of integral weight k on Gamma_0(4).  M_6 and M_8 of level 4 have
// bases whose q-expansions come from divisor-power sieves and sparse eta
// folds:
//   M_6 = <E6(q), E6(q^2), E6(q^4), eta(2z)^12>,
//   M_8 = <E8(q), E8(q^2), E8(q^4), g(q), g(q^2)>,  g = eta(z)^8 eta(2z)^8.
// The inner form's coordinates in that basis are solved exactly from
// precision-64 expansions (far past the Sturm bound 4 for weight 8, level 4,
// so consistency across 64 coefficients proves the identity), and the basis
// is then expanded at full precision and folded with theta.
QSeries fast_expand_combination(
    int k, const std::vector<std::pair<MonomialExponents, Rational>>& combo,
    std::size_t prec);

} // namespace halfint::detail
