#include "fast_expand.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "halfint/errors.hpp"

namespace halfint::detail {

namespace {

using I128 = __int128;

constexpr std::size_t kSmallPrec = 64;
constexpr std::size_t kMaxPrec = 2'000'001;

Integer mpz_from_i128(I128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v)
                              : static_cast<unsigned __int128>(v);
    Integer r;
    mpz_import(r.get_mpz_t(), 2, -1 /*LSW first*/, 8, 0, 0, &u);
    return neg ? Integer(-r) : r;
}

// Sparse series term: q^offset with an integer coefficient.
struct SparseTerm {
    std::size_t offset;
    long coeff;
};

// Pentagonal-number expansion of prod (1 - q^{s n}).
std::vector<SparseTerm> euler_support(std::size_t scale, std::size_t prec) {
    std::vector<SparseTerm> sup;
    sup.push_back({0, 1});
    for (long m = 1;; ++m) {
        const unsigned long e1 = static_cast<unsigned long>(m) * (3 * m - 1) / 2;
        const unsigned long e2 = static_cast<unsigned long>(m) * (3 * m + 1) / 2;
        const long c = (m % 2 != 0) ? -1 : 1;
        bool any = false;
        if (scale * e1 < prec) {
            sup.push_back({scale * e1, c});
            any = true;
        }
        if (scale * e2 < prec) {
            sup.push_back({scale * e2, c});
            any = true;
        }
        if (!any) break;
    }
    return sup;
}

// Cube expansion of prod (1 - q^{s n})^3: sum (-1)^m (2m+1) q^{s m(m+1)/2}.
std::vector<SparseTerm> eta_cube_support(std::size_t scale, std::size_t prec) {
    std::vector<SparseTerm> sup;
    for (long m = 0;; ++m) {
        const unsigned long e = static_cast<unsigned long>(m) * (m + 1) / 2;
        if (scale * e >= prec) break;
        const long c = (m % 2 != 0) ? -(2 * m + 1) : (2 * m + 1);
        sup.push_back({scale * e, c});
    }
    return sup;
}

// arr <- arr (*) sparse, truncated at arr.size().
void fold_sparse(std::vector<I128>& arr, const std::vector<SparseTerm>& sup) {
    const std::size_t P = arr.size();
    std::vector<I128> out(P, 0);
    for (const SparseTerm& t : sup) {
        const I128 c = t.coeff;
        const std::size_t e = t.offset;
        if (c == 1) {
            for (std::size_t n = 0; n + e < P; ++n) out[n + e] += arr[n];
        } else if (c == -1) {
            for (std::size_t n = 0; n + e < P; ++n) out[n + e] -= arr[n];
        } else {
            for (std::size_t n = 0; n + e < P; ++n) out[n + e] += c * arr[n];
        }
    }
    arr.swap(out);
}

void check_i128_headroom(const std::vector<I128>& arr, const char* what) {
    // All certified intermediates stay far below 2^120; a breach means the
    // magnitude analysis no longer applies to this usage.
    constexpr I128 bound = I128(1) << 120;
    for (const I128 v : arr) {
        const I128 a = v < 0 ? -v : v;
        if (a >= bound)
            throw std::overflow_error(std::string("fast_expand: 128-bit headroom "
                                                  "exceeded in ") + what);
    }
}

// eta(2z)^12 = q * S(q)^4 with S = sum (-1)^m (2m+1) q^{m(m+1)}, as integers.
std::vector<Integer> eta2_pow12(std::size_t prec) {
    const auto sup = eta_cube_support(2, prec);
    std::vector<I128> arr(prec > 1 ? prec - 1 : 1, 0);
    arr[0] = 1;
    for (int i = 0; i < 4; ++i) fold_sparse(arr, sup);
    check_i128_headroom(arr, "eta(2z)^12");
    std::vector<Integer> out(prec);
    for (std::size_t n = 0; n + 1 < prec; ++n) out[n + 1] = mpz_from_i128(arr[n]);
    return out;
}

// g = eta(z)^8 eta(2z)^8 = q * prod(1-q^n)^8 prod(1-q^{2n})^8, as integers.
std::vector<Integer> eta1_8_eta2_8(std::size_t prec) {
    const auto s1 = euler_support(1, prec);
    const auto s2 = euler_support(2, prec);
    std::vector<I128> arr(prec > 1 ? prec - 1 : 1, 0);
    arr[0] = 1;
    for (int i = 0; i < 8; ++i) fold_sparse(arr, s1);
    for (int i = 0; i < 8; ++i) fold_sparse(arr, s2);
    check_i128_headroom(arr, "eta(z)^8 eta(2z)^8");
    std::vector<Integer> out(prec);
    for (std::size_t n = 0; n + 1 < prec; ++n) out[n + 1] = mpz_from_i128(arr[n]);
    return out;
}

std::vector<Integer> substitute_q2(const std::vector<Integer>& a) {
    std::vector<Integer> out(a.size());
    for (std::size_t n = 0; 2 * n < a.size(); ++n) out[2 * n] = a[n];
    return out;
}

// sigma_j(n) for n < prec.
std::vector<Integer> sigma_sieve(unsigned j, std::size_t prec) {
    std::vector<Integer> acc(prec);
    for (std::size_t d = 1; d < prec; ++d) {
        const Integer dp = pow_ui(static_cast<unsigned long>(d), j);
        for (std::size_t n = d; n < prec; n += d) acc[n] += dp;
    }
    return acc;
}

// E_w(q^s) = 1 + c_w sum sigma_{w-1}(n) q^{s n} as integer vectors.
std::vector<Integer> eisenstein_scaled(const std::vector<Integer>& sigma, long c,
                                       std::size_t scale, std::size_t prec) {
    std::vector<Integer> out(prec);
    out[0] = 1;
    for (std::size_t n = 1; scale * n < prec; ++n) out[scale * n] = c * sigma[n];
    return out;
}

QSeries to_small_qseries(const std::vector<Integer>& v) {
    std::vector<Rational> c(kSmallPrec);
    for (std::size_t n = 0; n < kSmallPrec; ++n) c[n] = Rational(v[n]);
    return QSeries(std::move(c));
}

// Exact solve of sum_i x_i * basis[i] = target across all kSmallPrec
// coefficients; throws VerificationError if the system is inconsistent.
std::vector<Rational> solve_coordinates(const std::vector<QSeries>& basis,
                                        const QSeries& target) {
    const std::size_t dim = basis.size();
    std::vector<std::vector<Rational>> rows(kSmallPrec,
                                            std::vector<Rational>(dim + 1));
    for (std::size_t n = 0; n < kSmallPrec; ++n) {
        for (std::size_t i = 0; i < dim; ++i) rows[n][i] = basis[i].coeff(n);
        rows[n][dim] = target.coeff(n);
    }

    std::size_t r = 0;
    std::vector<std::size_t> pivot_rows;
    for (std::size_t c = 0; c < dim && r < rows.size(); ++c) {
        std::size_t pr = r;
        while (pr < rows.size() && sgn(rows[pr][c]) == 0) ++pr;
        if (pr == rows.size())
            throw VerificationError("fast_expand: basis is degenerate on the sample range");
        std::swap(rows[r], rows[pr]);
        const Rational inv = rows[r][c];
        for (std::size_t j = c; j <= dim; ++j) rows[r][j] /= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = c; j <= dim; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivot_rows.push_back(r);
        ++r;
    }
    // Everything below the pivots must have been annihilated, including the
    // augmented column: that consistency IS the proof of the identity (the
    // sample range is far beyond the Sturm bound).
    for (std::size_t i = r; i < rows.size(); ++i)
        if (sgn(rows[i][dim]) != 0)
            throw VerificationError(
                "fast_expand: inner form is not a combination of the structure basis");
    std::vector<Rational> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = rows[c][dim];
    return x;
}

} // namespace

bool fast_expand_supported(int k) { return k == 6 || k == 8; }

QSeries fast_expand_combination(
    int k, const std::vector<std::pair<MonomialExponents, Rational>>& combo,
    std::size_t prec) {
    if (!fast_expand_supported(k))
        throw std::invalid_argument("fast_expand: only k in {6, 8} is supported");
    if (prec > kMaxPrec)
        throw PrecisionError("fast_expand: precision cap is " + std::to_string(kMaxPrec) +
                             " (magnitude bounds certified up to there)");
    if (prec < 2 * kSmallPrec)
        throw std::invalid_argument("fast_expand: precision too small for the fast path");

    // Divide theta out of every monomial: inner = sum c * theta^(a-1) F^b.
    std::vector<std::pair<MonomialExponents, Rational>> inner_combo;
    for (const auto& [exps, c] : combo) {
        const auto [a, b] = exps;
        if (a < 1 || a % 2 == 0)
            throw std::invalid_argument("fast_expand: theta exponent must be odd and >= 1");
        inner_combo.push_back({{a - 1, b}, c});
    }

    const unsigned w = static_cast<unsigned>(k); // inner weight
    const long cw = (w == 6) ? -504 : 480;

    // --- small side: exact coordinates of inner in the structure basis ---
    const QSeries inner_small = combination_series(inner_combo, kSmallPrec);
    const auto sigma_small = sigma_sieve(w - 1, kSmallPrec);
    std::vector<std::vector<Integer>> basis_small_vec;
    for (std::size_t s : {std::size_t(1), std::size_t(2), std::size_t(4)})
        basis_small_vec.push_back(eisenstein_scaled(sigma_small, cw, s, kSmallPrec));
    if (w == 6) {
        basis_small_vec.push_back(eta2_pow12(kSmallPrec));
    } else {
        auto g = eta1_8_eta2_8(kSmallPrec);
        basis_small_vec.push_back(g);
        basis_small_vec.push_back(substitute_q2(g));
    }
    std::vector<QSeries> basis_small;
    for (const auto& v : basis_small_vec) basis_small.push_back(to_small_qseries(v));
    const std::vector<Rational> coords = solve_coordinates(basis_small, inner_small);

    // Common denominator L: work in L * inner to stay integral throughout.
    Integer L(1);
    for (const auto& x : coords)
        mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<Integer> weights; // L * coords
    for (const auto& x : coords) {
        Rational w_scaled = x * Rational(L);
        weights.push_back(w_scaled.get_num()); // denominator is 1 by construction
    }

    // --- big side: inner_scaled = L * inner via sieves and folds ---
    std::vector<Integer> inner_scaled(prec);
    {
        const auto sigma = sigma_sieve(w - 1, prec);
        const std::size_t scales[3] = {1, 2, 4};
        for (int i = 0; i < 3; ++i) {
            if (sgn(weights[i]) == 0) continue;
            const Integer wc = weights[i] * cw;
            inner_scaled[0] += weights[i]; // constant term of E_w
            for (std::size_t n = 1; scales[i] * n < prec; ++n)
                inner_scaled[scales[i] * n] += wc * sigma[n];
        }
    }
    auto add_cusp_part = [&](const std::vector<Integer>& series, const Integer& wgt) {
        if (sgn(wgt) == 0) return;
        for (std::size_t n = 0; n < prec; ++n)
            if (sgn(series[n]) != 0)
                mpz_addmul(inner_scaled[n].get_mpz_t(), series[n].get_mpz_t(),
                           wgt.get_mpz_t());
    };
    if (w == 6) {
        add_cusp_part(eta2_pow12(prec), weights[3]);
    } else {
        const auto g = eta1_8_eta2_8(prec);
        add_cusp_part(g, weights[3]);
        add_cusp_part(substitute_q2(g), weights[4]);
    }

    // --- multiply by theta: out = inner_scaled * (1 + 2 sum q^{m^2}) ---
    std::vector<Integer> out = inner_scaled;
    for (std::size_t m = 1; m * m < prec; ++m) {
        const std::size_t e = m * m;
        for (std::size_t n = 0; n + e < prec; ++n)
            if (sgn(inner_scaled[n]) != 0)
                mpz_addmul_ui(out[n + e].get_mpz_t(), inner_scaled[n].get_mpz_t(), 2);
    }
    inner_scaled.clear();
    inner_scaled.shrink_to_fit();

    std::vector<Rational> coeffs(prec);
    for (std::size_t n = 0; n < prec; ++n) {
        Rational c(out[n], L);
        c.canonicalize();
        coeffs[n] = std::move(c);
    }
    return QSeries(std::move(coeffs));
}

} // namespace halfint::detail
