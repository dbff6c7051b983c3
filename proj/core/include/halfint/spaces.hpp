#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "halfint/qseries.hpp"

namespace halfint {

// Exponent pair (a, b) for a monomial theta^a * F^b.
using MonomialExponents = std::pair<int, int>;

// A form of weight k + 1/2 on Gamma_0(4), carried as an exact q-expansion
// together with its construction record (the theta/F monomial combination),
// so the same form can be re-expanded at a different precision.
struct HalfIntegralForm {
    int k = 0;               // weight is k + 1/2
    int level = 4;
    QSeries coeffs;
    bool plus_space = false; // support restricted to n = 0, (-1)^k mod 4
    bool cusp = false;

    // Set by normalize_at_t: index of the first admissible square-free
    // coefficient, scaled to 1.
    std::uint64_t t = 0;
    bool normalized = false;

    // coeffs = sum over (exponents -> coefficient) of theta^a F^b.  Empty for
    // forms that are not tracked back to the monomial ring (e.g. Hecke images).
    std::vector<std::pair<MonomialExponents, Rational>> combination;

    // T_{p^2} eigenvalues recorded by eigenbasis(), keyed by p.
    std::map<std::uint64_t, Rational> eigenvalues;

    int weight_numerator() const { return 2 * k + 1; } // weight = this / 2
};

struct SpaceBasis {
    int k = 0;
    std::vector<MonomialExponents> monomials; // ambient monomial exponents
    std::vector<HalfIntegralForm> forms;      // echelonized basis
    std::size_t dimension() const { return forms.size(); }
};

// Admissible normalization indices: square-free t >= 1 whose residue mod 4
// survives in the plus space, i.e. t mod 4 differs from 2 and from
// (-1)^{k+1} mod 4 (= 3 for even k, 1 for odd k).
bool admissible_index(std::uint64_t t, int k);

// Expand a theta^a F^b combination directly at the given precision (the
// slow-but-universal route; extend_precision dispatches here or to the
// structure-constant fast path).
QSeries combination_series(
    const std::vector<std::pair<MonomialExponents, Rational>>& combo,
    std::size_t prec);

// All monomials theta^a F^b with a + 4b = 2k + 1, a >= 0, b >= 0, expanded to
// the given precision.  Requires k >= 2.
SpaceBasis monomial_basis(int k, std::size_t prec);

// Cut the plus-space cusp forms out of the monomial span by exact linear
// algebra: impose coeff(0) = 0 and coeff(n) = 0 for n = 2, (-1)^{k+1} mod 4,
// n < prec.  The returned basis is reduced-echelon in the q-expansion (each
// form has leading coefficient 1 at a pivot index where the others vanish).
//
// Requires prec >= 10 * k; throws PrecisionError if the computed dimension is
// not stable when only the first prec/2 constraints are imposed (i.e. the
// answer could still depend on the truncation point).
SpaceBasis plus_cusp_space(int k, std::size_t prec);

// Split a plus-cusp space into one-dimensional simultaneous eigenspaces of
// T_{p^2} for the given odd primes, in order.  Eigenvalues are recorded on
// each returned form; every eigen equation is re-checked exactly on the full
// overlap of precisions.  Throws EigenSplitError (message carries the
// characteristic polynomial) if a block does not split over Q.
std::vector<HalfIntegralForm> eigenbasis(const SpaceBasis& space,
                                         const std::vector<std::uint64_t>& primes);

// Scale f so that its first nonzero admissible square-free coefficient is 1;
// records t.  Idempotent.  Throws PrecisionError if every admissible
// square-free index within precision carries a zero coefficient.
HalfIntegralForm normalize_at_t(const HalfIntegralForm& f);

// Re-expand a form from its recorded monomial combination at a new precision
// (larger or smaller).  Support and normalization are re-checked exactly.
// Large re-expansions (prec > 2000) take a structure-constant fast path that
// exists for the desk-scale weights 13/2 and 17/2 (k = 6, 8).
HalfIntegralForm extend_precision(const HalfIntegralForm& f, std::size_t prec);

// Exact nullspace of an m x n rational matrix (rows of equal length):
// returns a basis of column vectors v with M v = 0.
std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& rows, std::size_t ncols);

} // namespace halfint
