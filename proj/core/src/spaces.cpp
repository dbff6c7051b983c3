#include "halfint/spaces.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "halfint/errors.hpp"
#include "halfint/hecke.hpp"
#include "fast_expand.hpp"

namespace halfint {

bool admissible_index(std::uint64_t t, int k) {
    if (t == 0 || !is_squarefree(t)) return false;
    const unsigned killed = (k % 2 == 0) ? 3u : 1u;
    const unsigned r = static_cast<unsigned>(t % 4);
    return r != 2u && r != killed;
}

QSeries combination_series(
    const std::vector<std::pair<MonomialExponents, Rational>>& combo,
    std::size_t prec) {
    if (combo.empty())
        throw std::invalid_argument("combination_series: empty combination");
    const QSeries th = theta_series(prec);
    const QSeries F = f2_series(prec);

    // Group by F-exponent so the F-power chain is built once; theta enters
    // as repeated sparse folds (theta has ~sqrt(prec) nonzero terms).
    std::map<int, std::vector<std::pair<int, Rational>>> by_b;
    for (const auto& [exps, c] : combo) {
        const auto [a, b] = exps;
        if (a < 0 || b < 0)
            throw std::invalid_argument("combination_series: negative exponent");
        if (sgn(c) != 0) by_b[b].push_back({a, c});
    }

    QSeries acc(prec);
    QSeries fpow(prec);
    fpow.set_coeff(0, 1);
    int cur_b = 0;
    for (const auto& [b, terms] : by_b) {
        while (cur_b < b) {
            fpow = fpow * F;
            ++cur_b;
        }
        for (const auto& [a, c] : terms) {
            QSeries m = fpow;
            for (int i = 0; i < a; ++i) m = m * th;
            m *= c;
            acc = acc + m;
        }
    }
    return acc;
}

SpaceBasis monomial_basis(int k, std::size_t prec) {
    if (k < 2)
        throw std::invalid_argument("monomial_basis: k must be >= 2");
    if (prec < 2)
        throw std::invalid_argument("monomial_basis: precision must be >= 2");

    SpaceBasis basis;
    basis.k = k;
    const int wnum = 2 * k + 1;
    for (int b = 0; 4 * b <= wnum; ++b) {
        const int a = wnum - 4 * b;
        if (a >= 0) basis.monomials.push_back({a, b});
    }
    // List with a descending (theta-heavy first), matching the natural
    // grading of the construction.
    std::sort(basis.monomials.begin(), basis.monomials.end(),
              [](auto& x, auto& y) { return x.first > y.first; });

    for (const auto& exps : basis.monomials) {
        HalfIntegralForm f;
        f.k = k;
        f.coeffs = combination_series({{exps, Rational(1)}}, prec);
        f.combination = {{exps, Rational(1)}};
        basis.forms.push_back(std::move(f));
    }
    return basis;
}

std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& rows, std::size_t ncols) {
    std::vector<std::vector<Rational>> M = rows;
    for (const auto& r : M)
        if (r.size() != ncols)
            throw std::invalid_argument("rational_nullspace: ragged matrix");

    std::vector<std::ptrdiff_t> pivot_row_of_col(ncols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < M.size(); ++c) {
        std::size_t pr = r;
        while (pr < M.size() && sgn(M[pr][c]) == 0) ++pr;
        if (pr == M.size()) continue;
        std::swap(M[r], M[pr]);
        const Rational inv = M[r][c];
        for (std::size_t j = c; j < ncols; ++j) M[r][j] /= inv;
        for (std::size_t i = 0; i < M.size(); ++i) {
            if (i == r || sgn(M[i][c]) == 0) continue;
            const Rational f = M[i][c];
            for (std::size_t j = c; j < ncols; ++j) M[i][j] -= f * M[r][j];
        }
        pivot_row_of_col[c] = static_cast<std::ptrdiff_t>(r);
        ++r;
    }

    std::vector<std::vector<Rational>> basis;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (pivot_row_of_col[c] >= 0) continue;
        std::vector<Rational> v(ncols);
        v[c] = 1;
        for (std::size_t pc = 0; pc < ncols; ++pc) {
            if (pivot_row_of_col[pc] < 0) continue;
            v[pc] = -M[static_cast<std::size_t>(pivot_row_of_col[pc])][c];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {

bool plus_constrained_index(std::size_t n, int k) {
    const unsigned killed = (k % 2 == 0) ? 3u : 1u;
    return n % 4 == 2u || n % 4 == killed;
}

void verify_plus_cusp_support(const QSeries& s, int k, const char* who) {
    if (sgn(s.coeff(0)) != 0)
        throw VerificationError(std::string(who) + ": nonzero constant term");
    for (std::size_t n = 1; n < s.precision(); ++n)
        if (plus_constrained_index(n, k) && sgn(s.coeff(n)) != 0)
            throw VerificationError(std::string(who) +
                                    ": nonzero coefficient in an excluded residue class at q^" +
                                    std::to_string(n));
}

using Combo = std::vector<std::pair<MonomialExponents, Rational>>;

Combo merge_combinations(const std::vector<const Combo*>& parts,
                         const std::vector<Rational>& weights) {
    std::map<MonomialExponents, Rational> acc;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (sgn(weights[i]) == 0) continue;
        for (const auto& [exps, c] : *parts[i]) acc[exps] += weights[i] * c;
    }
    Combo out;
    for (auto& [exps, c] : acc)
        if (sgn(c) != 0) out.push_back({exps, c});
    return out;
}

void scale_combo(Combo& combo, const Rational& c) {
    for (auto& [e, x] : combo) x *= c;
}

} // namespace

SpaceBasis plus_cusp_space(int k, std::size_t prec) {
    if (k < 2)
        throw std::invalid_argument("plus_cusp_space: k must be >= 2");
    if (prec < static_cast<std::size_t>(10 * k))
        throw std::invalid_argument("plus_cusp_space: precision must be at least 10k = " +
                                    std::to_string(10 * k));

    SpaceBasis mono = monomial_basis(k, prec);
    const std::size_t D = mono.forms.size();

    auto constraint_rows = [&](std::size_t upto) {
        std::vector<std::vector<Rational>> rows;
        for (std::size_t n = 0; n < upto; ++n) {
            if (n != 0 && !plus_constrained_index(n, k)) continue;
            std::vector<Rational> row(D);
            for (std::size_t d = 0; d < D; ++d) row[d] = mono.forms[d].coeffs.coeff(n);
            rows.push_back(std::move(row));
        }
        return rows;
    };

    auto ns = rational_nullspace(constraint_rows(prec), D);
    const auto ns_half = rational_nullspace(constraint_rows(prec / 2), D);
    if (ns.size() != ns_half.size())
        throw PrecisionError(
            "plus_cusp_space: dimension is not stable under halving the constraint "
            "range (" + std::to_string(ns.size()) + " vs " + std::to_string(ns_half.size()) +
            "); increase precision");

    struct Cand {
        QSeries s;
        std::vector<Rational> combo; // coordinates over the monomials
        Cand() : s(1) {}
    };
    std::vector<Cand> cands;
    for (const auto& v : ns) {
        Cand c;
        c.combo = v;
        QSeries s(prec);
        for (std::size_t d = 0; d < D; ++d) {
            if (sgn(v[d]) == 0) continue;
            QSeries term = mono.forms[d].coeffs;
            term *= v[d];
            s = s + term;
        }
        c.s = std::move(s);
        cands.push_back(std::move(c));
    }

    // Echelonize in the q-expansion: distinct pivot indices, pivot
    // coefficient 1, zero at the other forms' pivots.
    for (std::size_t i = 0; i < cands.size(); ++i) {
        std::size_t best = i;
        std::size_t best_lead = prec;
        for (std::size_t j = i; j < cands.size(); ++j) {
            auto lead = cands[j].s.leading_index();
            if (!lead)
                throw VerificationError("plus_cusp_space: nullspace vector produced the zero series");
            if (*lead < best_lead) {
                best_lead = *lead;
                best = j;
            }
        }
        std::swap(cands[i], cands[best]);
        const Rational lc = cands[i].s.coeff(best_lead);
        cands[i].s /= lc;
        for (auto& x : cands[i].combo) x /= lc;
        for (std::size_t j = 0; j < cands.size(); ++j) {
            if (j == i) continue;
            const Rational f = cands[j].s.coeff(best_lead);
            if (sgn(f) == 0) continue;
            QSeries scaled = cands[i].s;
            scaled *= f;
            cands[j].s = cands[j].s - scaled;
            for (std::size_t d = 0; d < D; ++d)
                cands[j].combo[d] -= f * cands[i].combo[d];
        }
    }

    SpaceBasis out;
    out.k = k;
    out.monomials = mono.monomials;
    for (auto& c : cands) {
        verify_plus_cusp_support(c.s, k, "plus_cusp_space");
        HalfIntegralForm f;
        f.k = k;
        f.coeffs = std::move(c.s);
        f.plus_space = true;
        f.cusp = true;
        for (std::size_t d = 0; d < D; ++d)
            if (sgn(c.combo[d]) != 0)
                f.combination.push_back({mono.monomials[d], c.combo[d]});
        out.forms.push_back(std::move(f));
    }
    std::sort(out.forms.begin(), out.forms.end(), [](const auto& a, const auto& b) {
        return a.coeffs.leading_index().value() < b.coeffs.leading_index().value();
    });
    return out;
}

namespace {

// det(x I - M) as monic coefficients [c_0, ..., c_m] (c_m = 1), exact.
std::vector<Rational> char_poly(const std::vector<std::vector<Rational>>& M) {
    const std::size_t m = M.size();
    auto det_at = [&](const Rational& x) {
        std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                A[i][j] = (i == j) ? Rational(x - M[i][j]) : Rational(-M[i][j]);
        Rational det(1);
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t pr = c;
            while (pr < m && sgn(A[pr][c]) == 0) ++pr;
            if (pr == m) return Rational(0);
            if (pr != c) {
                std::swap(A[pr], A[c]);
                det = -det;
            }
            det *= A[c][c];
            for (std::size_t i = c + 1; i < m; ++i) {
                if (sgn(A[i][c]) == 0) continue;
                const Rational f = A[i][c] / A[c][c];
                for (std::size_t j = c; j < m; ++j) A[i][j] -= f * A[c][j];
            }
        }
        return det;
    };

    // Lagrange interpolation through m+1 points.
    std::vector<Rational> poly(m + 1); // coefficients, low to high
    for (std::size_t i = 0; i <= m; ++i) {
        const Rational xi(static_cast<unsigned long>(i));
        const Rational yi = det_at(xi);
        // basis polynomial prod_{j != i} (X - x_j) / (x_i - x_j)
        std::vector<Rational> num(1, Rational(1));
        Rational den(1);
        for (std::size_t j = 0; j <= m; ++j) {
            if (j == i) continue;
            const Rational xj(static_cast<unsigned long>(j));
            std::vector<Rational> nxt(num.size() + 1);
            for (std::size_t d = 0; d < num.size(); ++d) {
                nxt[d] -= xj * num[d];
                nxt[d + 1] += num[d];
            }
            num = std::move(nxt);
            den *= xi - xj;
        }
        const Rational w = yi / den;
        for (std::size_t d = 0; d < num.size(); ++d) poly[d] += w * num[d];
    }
    return poly;
}

std::string poly_to_string(const std::vector<Rational>& poly) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t d = poly.size(); d-- > 0;) {
        if (sgn(poly[d]) == 0 && !(first && d == 0)) continue;
        Rational c = poly[d];
        if (first) {
            if (sgn(c) < 0) os << "-";
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        c = abs(c);
        const bool unit = (cmp(c, 1) == 0);
        if (d == 0 || !unit) os << c.get_str();
        if (d > 0) {
            if (!unit) os << "*";
            os << "x";
            if (d > 1) os << "^" << d;
        }
        first = false;
    }
    return os.str();
}

// Exact rational square root: returns true and sets r if x = r^2, x >= 0.
bool rational_sqrt(const Rational& x, Rational& r) {
    if (sgn(x) < 0) return false;
    if (sgn(x) == 0) {
        r = 0;
        return true;
    }
    const Integer& num = x.get_num();
    const Integer& den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    r = Rational(rn) / Rational(rd);
    return true;
}

} // namespace

std::vector<HalfIntegralForm> eigenbasis(const SpaceBasis& space,
                                         const std::vector<std::uint64_t>& primes) {
    if (space.forms.empty())
        throw std::invalid_argument("eigenbasis: space must have dimension >= 1");
    if (primes.empty())
        throw std::invalid_argument("eigenbasis: need at least one prime");

    const std::size_t m = space.forms.size();
    const std::size_t prec = space.forms[0].coeffs.precision();

    // Pivot structure of the echelonized basis.
    std::vector<std::size_t> piv(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto lead = space.forms[i].coeffs.leading_index();
        if (!lead) throw std::invalid_argument("eigenbasis: zero basis form");
        piv[i] = *lead;
        for (std::size_t j = 0; j < m; ++j) {
            const Rational& c = space.forms[j].coeffs.coeff(piv[i]);
            if (cmp(c, (i == j) ? 1 : 0) != 0)
                throw std::invalid_argument("eigenbasis: basis is not reduced-echelon");
        }
    }
    const std::size_t piv_max = piv.back();

    // Invariant blocks, each a list of rref'd coordinate vectors (length m).
    using Block = std::vector<std::vector<Rational>>;
    std::vector<Block> blocks;
    {
        Block id;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<Rational> e(m);
            e[i] = 1;
            id.push_back(std::move(e));
        }
        blocks.push_back(std::move(id));
    }

    auto series_of = [&](const std::vector<Rational>& coords) {
        QSeries s(prec);
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(coords[i]) == 0) continue;
            QSeries term = space.forms[i].coeffs;
            term *= coords[i];
            s = s + term;
        }
        return s;
    };

    for (std::uint64_t p : primes) {
        // Ambient matrix of T_{p^2}: column j = coordinates of the image of
        // basis form j, read off at the pivot indices.
        std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m));
        for (std::size_t j = 0; j < m; ++j) {
            const HalfIntegralForm img = tp2_half(space.forms[j], p);
            const std::size_t iprec = img.coeffs.precision();
            if (iprec <= piv_max)
                throw PrecisionError(
                    "eigenbasis: image precision " + std::to_string(iprec) +
                    " at p = " + std::to_string(p) +
                    " does not reach the last pivot index " + std::to_string(piv_max));
            for (std::size_t i = 0; i < m; ++i) M[i][j] = img.coeffs.coeff(piv[i]);
            // The image must lie in the computed span: re-check every
            // coefficient, not just the pivots.
            QSeries recon(iprec);
            for (std::size_t i = 0; i < m; ++i) {
                if (sgn(M[i][j]) == 0) continue;
                QSeries term = space.forms[i].coeffs.truncated(iprec);
                term *= M[i][j];
                recon = recon + term;
            }
            if (!(recon == img.coeffs))
                throw VerificationError(
                    "eigenbasis: T_{p^2} image of a basis form leaves the computed "
                    "span at p = " + std::to_string(p));
        }

        std::vector<Block> next;
        for (Block& B : blocks) {
            const std::size_t s = B.size();
            if (s == 1) {
                next.push_back(std::move(B));
                continue;
            }
            // Pivot positions of the block's rref rows.
            std::vector<std::size_t> bp(s);
            for (std::size_t i = 0; i < s; ++i) {
                std::size_t c = 0;
                while (c < m && sgn(B[i][c]) == 0) ++c;
                bp[i] = c;
            }
            // Restriction R of M to the block.
            std::vector<std::vector<Rational>> R(s, std::vector<Rational>(s));
            for (std::size_t j = 0; j < s; ++j) {
                std::vector<Rational> w(m);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t l = 0; l < m; ++l)
                        if (sgn(M[i][l]) != 0 && sgn(B[j][l]) != 0)
                            w[i] += M[i][l] * B[j][l];
                std::vector<Rational> coords(s);
                for (std::size_t i = 0; i < s; ++i) coords[i] = w[bp[i]];
                // Invariance: w must equal sum coords_i * B_i exactly.
                std::vector<Rational> recon(m);
                for (std::size_t i = 0; i < s; ++i)
                    for (std::size_t l = 0; l < m; ++l) recon[l] += coords[i] * B[i][l];
                if (recon != w)
                    throw VerificationError(
                        "eigenbasis: invariant block is not preserved by T_{p^2} at p = " +
                        std::to_string(p));
                for (std::size_t i = 0; i < s; ++i) R[i][j] = coords[i];
            }

            if (s == 2) {
                const Rational tr = R[0][0] + R[1][1];
                const Rational det = R[0][0] * R[1][1] - R[0][1] * R[1][0];
                const Rational disc = tr * tr - Rational(4) * det;
                Rational root;
                if (sgn(disc) == 0) {
                    const Rational lam = tr / Rational(2);
                    const bool scalar = (cmp(R[0][1], 0) == 0 && cmp(R[1][0], 0) == 0 &&
                                         cmp(R[0][0], lam) == 0 && cmp(R[1][1], lam) == 0);
                    if (!scalar)
                        throw EigenSplitError(
                            "eigenbasis: T_{p^2} at p = " + std::to_string(p) +
                            " is not semisimple on a 2-dimensional block; characteristic "
                            "polynomial " + poly_to_string(char_poly(R)));
                    next.push_back(std::move(B)); // scalar: no information at this p
                } else if (rational_sqrt(disc, root)) {
                    for (int pm = 0; pm < 2; ++pm) {
                        const Rational lam = (pm == 0)
                            ? Rational((tr + root) / Rational(2))
                            : Rational((tr - root) / Rational(2));
                        // Kernel of (R - lam I), guaranteed 1-dim since disc != 0.
                        Rational u0, u1;
                        if (cmp(R[0][1], 0) != 0 || cmp(R[0][0], lam) != 0) {
                            u0 = R[0][1];
                            u1 = lam - R[0][0];
                        } else {
                            u0 = lam - R[1][1];
                            u1 = R[1][0];
                        }
                        std::vector<Rational> v(m);
                        for (std::size_t l = 0; l < m; ++l)
                            v[l] = u0 * B[0][l] + u1 * B[1][l];
                        next.push_back(Block{std::move(v)});
                    }
                } else {
                    throw EigenSplitError(
                        "eigenbasis: T_{p^2} at p = " + std::to_string(p) +
                        " does not split over Q on a 2-dimensional block; characteristic "
                        "polynomial " + poly_to_string(char_poly(R)));
                }
            } else {
                throw EigenSplitError(
                    "eigenbasis: rational splitting implemented for blocks of dimension "
                    "<= 2; got dimension " + std::to_string(s) +
                    " at p = " + std::to_string(p) + "; characteristic polynomial " +
                    poly_to_string(char_poly(R)));
            }
        }
        blocks = std::move(next);
    }

    for (const Block& B : blocks)
        if (B.size() != 1) {
            std::string ps;
            for (std::uint64_t p : primes) ps += (ps.empty() ? "" : ", ") + std::to_string(p);
            throw EigenSplitError(
                "eigenbasis: the operators T_{p^2}, p in {" + ps +
                "}, do not separate the space into one-dimensional eigenspaces; "
                "supply more primes");
        }

    std::vector<HalfIntegralForm> out;
    for (const Block& B : blocks) {
        QSeries s = series_of(B[0]);
        auto lead = s.leading_index();
        if (!lead)
            throw VerificationError("eigenbasis: eigenvector gave the zero series");
        const Rational lc = s.coeff(*lead);
        s /= lc;

        HalfIntegralForm f;
        f.k = space.k;
        f.coeffs = std::move(s);
        f.plus_space = true;
        f.cusp = true;
        std::vector<const Combo*> parts;
        std::vector<Rational> weights;
        for (std::size_t i = 0; i < m; ++i) {
            parts.push_back(&space.forms[i].combination);
            weights.push_back(B[0][i] / lc);
        }
        f.combination = merge_combinations(parts, weights);

        for (std::uint64_t p : primes) {
            const HalfIntegralForm img = tp2_half(f, p);
            const Rational lam = img.coeffs.coeff(*lead);
            QSeries expect = f.coeffs.truncated(img.coeffs.precision());
            expect *= lam;
            if (!(expect == img.coeffs))
                throw VerificationError(
                    "eigenbasis: eigen equation fails exactly at p = " + std::to_string(p));
            f.eigenvalues[p] = lam;
        }
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.coeffs.leading_index().value() < b.coeffs.leading_index().value();
    });
    return out;
}

HalfIntegralForm normalize_at_t(const HalfIntegralForm& f) {
    if (f.coeffs.is_zero())
        throw std::invalid_argument("normalize_at_t: zero form");
    const std::size_t prec = f.coeffs.precision();
    for (std::uint64_t t = 1; t < prec; ++t) {
        if (!admissible_index(t, f.k)) continue;
        if (sgn(f.coeffs.coeff(t)) == 0) continue;
        if (f.normalized && f.t == t) return f; // idempotent
        HalfIntegralForm r = f;
        const Rational a = f.coeffs.coeff(t);
        r.coeffs /= a;
        scale_combo(r.combination, Rational(1) / a);
        r.t = t;
        r.normalized = true;
        return r;
    }
    throw PrecisionError(
        "normalize_at_t: every admissible square-free coefficient within precision " +
        std::to_string(prec) + " vanishes");
}

HalfIntegralForm extend_precision(const HalfIntegralForm& f, std::size_t prec) {
    if (prec == 0)
        throw std::invalid_argument("extend_precision: precision must be >= 1");
    const std::size_t cur = f.coeffs.precision();
    if (f.normalized && f.t >= prec)
        throw PrecisionError("extend_precision: requested precision drops the "
                             "normalization index t = " + std::to_string(f.t));

    HalfIntegralForm r = f;
    if (prec <= cur) {
        r.coeffs = f.coeffs.truncated(prec);
        return r;
    }

    if (f.combination.empty())
        throw std::invalid_argument(
            "extend_precision: form carries no construction record");

    // Dense monomial re-expansion is quadratic in the target precision, so
    // past a small threshold use the structure-constant expansion where one
    // is available (it is verified against the original below either way).
    constexpr std::size_t kDirectLimit = 2000;
    if (prec <= kDirectLimit || !detail::fast_expand_supported(f.k)) {
        if (prec > kDirectLimit)
            throw PrecisionError(
                "extend_precision: re-expansion beyond " + std::to_string(kDirectLimit) +
                " is implemented via structure constants only for k in {6, 8}; got k = " +
                std::to_string(f.k));
        r.coeffs = combination_series(f.combination, prec);
    } else {
        r.coeffs = detail::fast_expand_combination(f.k, f.combination, prec);
    }

    // The re-expansion must reproduce the original on the overlap...
    if (!QSeries::agree_on_overlap(r.coeffs, f.coeffs))
        throw VerificationError("extend_precision: re-expanded series disagrees with "
                                "the original on the overlap");
    // ...and keep every structural invariant on the new range.
    if (f.plus_space)
        verify_plus_cusp_support(r.coeffs, f.k, "extend_precision");
    else if (f.cusp && sgn(r.coeffs.coeff(0)) != 0)
        throw VerificationError("extend_precision: cusp form grew a constant term");
    if (f.normalized && cmp(r.coeffs.coeff(f.t), 1) != 0)
        throw VerificationError("extend_precision: normalization lost on re-expansion");
    return r;
}

} // namespace halfint
