#include "halfint/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "halfint/errors.hpp"
#include "halfint/qseries.hpp"
#include "halfint/shimura.hpp"

namespace halfint {

namespace {

long double st_antiderivative(long double t) {
    // (1/pi)[arcsin t + t sqrt(1 - t^2)], the CDF of the semicircle measure
    // up to the additive constant 1/2.
    const long double pi = 3.14159265358979323846264338327950288L;
    return (std::asin(t) + t * std::sqrt(1.0L - t * t)) / pi;
}

long double to_ld(const Rational& q) {
    return static_cast<long double>(mpq_get_d(q.get_mpq_t()));
}

// ---- deterministic worker-parallel classification ----------------------
// Each prime's flag word is computed independently into a preallocated
// slot, so the result is identical for every worker count; reductions then
// run single-threaded over the flag vector.
using Flags = std::uint32_t;

std::vector<Flags> classify_primes(const std::vector<std::uint64_t>& ps,
                                   unsigned workers,
                                   const std::function<Flags(std::uint64_t)>& fn) {
    std::vector<Flags> flags(ps.size(), 0);
    if (ps.empty()) return flags;
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ps.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < ps.size(); ++i) flags[i] = fn(ps[i]);
        return flags;
    }
    std::vector<std::exception_ptr> errors(n_workers);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t lo = ps.size() * w / n_workers;
        const std::size_t hi = ps.size() * (w + 1) / n_workers;
        pool.emplace_back([&, lo, hi, w]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) flags[i] = fn(ps[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return flags;
}

std::vector<std::uint64_t> odd_primes_upto(const PrimeTable& pt, std::uint64_t x) {
    if (x > pt.limit())
        throw std::invalid_argument("prime table limit " + std::to_string(pt.limit()) +
                                    " is below x = " + std::to_string(x));
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : pt.primes()) {
        if (p > x) break;
        if (p != 2) out.push_back(p);
    }
    return out;
}

struct SeriesSpec {
    std::string name;
    Flags bit;
    std::optional<long double> reference;
};

// Turn per-prime flag words into cumulative checkpoint counts.
DensityReport tally_report(std::string kind, std::uint64_t x, const PrimeTable& pt,
                           std::vector<std::uint64_t> excluded,
                           const std::vector<SeriesSpec>& specs,
                           const std::vector<std::uint64_t>& ps,
                           const std::vector<Flags>& flags) {
    DensityReport rep;
    rep.kind = std::move(kind);
    rep.checkpoints = checkpoint_ladder(x);
    rep.excluded_primes = std::move(excluded);
    const std::size_t n_cp = rep.checkpoints.size();

    rep.pi_values.reserve(n_cp);
    rep.excluded_counts.reserve(n_cp);
    for (std::uint64_t cp : rep.checkpoints) {
        rep.pi_values.push_back(pt.count_upto(cp));
        std::uint64_t ex = 0;
        for (std::uint64_t q : rep.excluded_primes)
            if (q <= cp) ++ex;
        rep.excluded_counts.push_back(ex);
    }

    // Segment counts (between consecutive checkpoints), then prefix sums.
    std::vector<std::vector<std::uint64_t>> seg(specs.size(),
                                                std::vector<std::uint64_t>(n_cp, 0));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto it = std::lower_bound(rep.checkpoints.begin(), rep.checkpoints.end(),
                                         ps[i]);
        const std::size_t si = static_cast<std::size_t>(it - rep.checkpoints.begin());
        for (std::size_t s = 0; s < specs.size(); ++s)
            if (flags[i] & specs[s].bit) ++seg[s][si];
    }
    for (std::size_t s = 0; s < specs.size(); ++s) {
        DensitySeries ds;
        ds.name = specs[s].name;
        ds.reference = specs[s].reference;
        std::uint64_t run = 0;
        for (std::size_t i = 0; i < n_cp; ++i) {
            run += seg[s][i];
            ds.counts.push_back(run);
            const std::uint64_t denom = rep.denominator(i);
            ds.ratios.push_back(denom == 0 ? 0.0L
                                           : static_cast<long double>(run) /
                                                 static_cast<long double>(denom));
        }
        rep.series.push_back(std::move(ds));
    }
    return rep;
}

// Exact bin index for a normalized value X/(2 p^{k-1/2}) on the edge grid,
// or -1 when the value lies outside [-1, 1].  The last bin is closed.
int bin_of(const Rational& X, std::uint64_t p, int k,
           const std::vector<Rational>& edges) {
    const int B = static_cast<int>(edges.size()) - 1;
    if (compare_normalized(X, p, k, edges.front()) < 0) return -1;
    if (compare_normalized(X, p, k, edges.back()) > 0) return -1;
    int i = B - 1;
    while (i > 0 && compare_normalized(X, p, k, edges[static_cast<std::size_t>(i)]) < 0)
        --i;
    return i;
}

std::vector<Rational> uniform_edges(unsigned bins) {
    if (bins < 1 || bins > 1000)
        throw std::invalid_argument("histogram bin count must be in [1, 1000]");
    std::vector<Rational> edges;
    edges.reserve(bins + 1);
    for (unsigned i = 0; i <= bins; ++i) {
        Rational e(2 * static_cast<long>(i) - static_cast<long>(bins),
                   static_cast<long>(bins));
        e.canonicalize();
        edges.push_back(e);
    }
    return edges;
}

int weight_index_of(const IntegralForm& F, const char* who) {
    if (F.weight < 4 || F.weight % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": need an even weight >= 4");
    return F.weight / 2;
}

std::string weight_label(const HalfIntegralForm& f) {
    return std::to_string(f.weight_numerator()) + "/2";
}

} // namespace

long double st_mass(long double a, long double b) {
    if (!(a >= -1.0L && a <= 1.0L && b >= -1.0L && b <= 1.0L))
        throw std::invalid_argument("st_mass: endpoints must lie in [-1, 1]");
    if (a > b) throw std::invalid_argument("st_mass: need a <= b");
    return st_antiderivative(b) - st_antiderivative(a);
}

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (cmp(lo, -1) < 0 || cmp(hi, 1) > 0 || cmp(lo, hi) > 0)
        throw std::invalid_argument(
            "interval endpoints must satisfy -1 <= lo <= hi <= 1");
}

long double Interval::reference_mass() const { return st_mass(to_ld(lo), to_ld(hi)); }

long double JointHistogram::max_abs_deviation() const {
    long double m = 0.0L;
    for (unsigned i = 0; i < bins; ++i)
        for (unsigned j = 0; j < bins; ++j)
            m = std::max(m, std::fabs(empirical_mass[i][j] - reference_mass[i][j]));
    return m;
}

Integer LiftedEigenform::lift_coeff_at(std::uint64_t p) const {
    return lift.coeff_int(p);
}

Integer LiftedEigenform::half_coeff_at(std::uint64_t p) const {
    Integer A = lift.coeff_int(p);
    const int ch = chi1(p, f.t, f.k);
    if (ch == 0) return A;
    Integer w = pow_ui(Integer(p), static_cast<unsigned long>(f.k - 1));
    return ch > 0 ? Integer(A - w) : Integer(A + w);
}

LiftedEigenform build_desk_eigenform(int k, std::uint64_t x, std::size_t shallow_prec) {
    SpaceBasis space = plus_cusp_space(k, shallow_prec);
    if (space.dimension() == 0)
        throw std::invalid_argument("build_desk_eigenform: the weight-" +
                                    std::to_string(2 * k + 1) +
                                    "/2 plus-cusp space is zero-dimensional");
    std::vector<HalfIntegralForm> eig = eigenbasis(space, {3});
    HalfIntegralForm f = normalize_at_t(eig.front());

    LiftedEigenform out;
    out.lift.weight = 2 * k;
    out.lift.level = 1;
    out.lift.coeffs = level1_cusp_eigenform(2 * k, static_cast<std::size_t>(x) + 1);
    out.lift.primitive = true;
    // Honesty gate: the deep expansion stands in for lift(f) only after the
    // divisor sum reproduces it on every index the shallow build can reach.
    out.verified_overlap =
        verify_lift_against(f, out.lift, static_cast<std::size_t>(x));
    out.f = std::move(f);
    return out;
}

std::vector<std::uint64_t> checkpoint_ladder(std::uint64_t x) {
    if (x < 2) throw std::invalid_argument("checkpoint_ladder: need x >= 2");
    std::vector<std::uint64_t> cps;
    for (std::uint64_t c = 10; c <= x; c *= 10) {
        cps.push_back(c);
        if (c > x / 10) break;  // next multiply would overflow past x anyway
    }
    if (cps.empty() || cps.back() != x) cps.push_back(x);
    return cps;
}

DensityReport sign_exception_ratio(const LiftedEigenform& e, std::uint64_t x,
                                    const PrimeTable& pt, unsigned workers) {
    const auto ps = odd_primes_upto(pt, x);
    const int k = e.f.k;
    constexpr Flags kDisagree = 1, kZero = 2;
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const Integer A = e.lift_coeff_at(p);
        const Integer a = e.half_coeff_at(p);
        const int sA = sign(A), sa = sign(a);
        if (sA == 0 || sa == 0) return kZero;
        if (sA == sa) return 0;
        // Certify the disagreement against the prime coefficient relation:
        // opposite signs force chi1(p) A(p) in (0, p^{k-1}) exactly.
        const int ch = chi1(p, e.f.t, k);
        const Integer bound = pow_ui(Integer(p), static_cast<unsigned long>(k - 1));
        if (ch == 0 || sA != ch || cmp(abs(A), bound) >= 0)
            throw VerificationError(
                "sign disagreement at p = " + std::to_string(p) +
                " is outside the boundary window predicted by the coefficient "
                "relation; the data path is inconsistent");
        return kDisagree;
    });
    DensityReport rep = tally_report(
        "sign-exceptions", x, pt, {2},
        {{"disagree", kDisagree, 0.0L}, {"zero-either", kZero, 0.0L}}, ps, flags);
    rep.meta.emplace_back("form", "weight " + weight_label(e.f) + ", t = " +
                                      std::to_string(e.f.t));
    rep.meta.emplace_back("lift", "weight " + std::to_string(e.lift.weight) + " level " +
                                      std::to_string(e.lift.level));
    rep.meta.emplace_back("verified_overlap", std::to_string(e.verified_overlap));
    return rep;
}

DensityReport product_sign_counts(const LiftedEigenform& e1, const LiftedEigenform& e2,
                                  std::uint64_t x, const PrimeTable& pt,
                                  unsigned workers) {
    const auto ps = odd_primes_upto(pt, x);
    constexpr Flags kNeg = 1, kPos = 2, kZero = 4, kLe = 8, kGe = 16;
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const int s = sign(e1.half_coeff_at(p)) * sign(e2.half_coeff_at(p));
        if (s < 0) return kNeg | kLe;
        if (s > 0) return kPos | kGe;
        return kZero | kLe | kGe;
    });
    DensityReport rep = tally_report("product-signs", x, pt, {2},
                                     {{"<0", kNeg, 0.5L},
                                      {">0", kPos, 0.5L},
                                      {"=0", kZero, 0.0L},
                                      {"<=0", kLe, 0.5L},
                                      {">=0", kGe, 0.5L}},
                                     ps, flags);
    // Partition identity at every checkpoint.
    for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
        const std::uint64_t neg = rep.series[0].counts[i], pos = rep.series[1].counts[i],
                            zer = rep.series[2].counts[i];
        if (neg + pos + zer != rep.denominator(i) ||
            rep.series[3].counts[i] != neg + zer || rep.series[4].counts[i] != pos + zer)
            throw VerificationError("product-sign tallies do not partition the primes at x = " +
                                    std::to_string(rep.checkpoints[i]));
    }
    rep.meta.emplace_back("forms", "weights " + weight_label(e1.f) + " and " +
                                       weight_label(e2.f));
    return rep;
}

JointHistogram joint_histogram(const IntegralForm& F, const IntegralForm& G,
                               std::uint64_t x, unsigned bins, const PrimeTable& pt,
                               unsigned workers) {
    const int k1 = weight_index_of(F, "joint_histogram");
    const int k2 = weight_index_of(G, "joint_histogram");
    const auto ps = odd_primes_upto(pt, x);
    JointHistogram h;
    h.kind = "joint-normalized-lift";
    h.bins = bins;
    h.edges = uniform_edges(bins);
    // Flag word: cell index + 1, or the sentinel 0 for out-of-domain.
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const int i = bin_of(F.coeffs.coeff(p), p, k1, h.edges);
        const int j = bin_of(G.coeffs.coeff(p), p, k2, h.edges);
        if (i < 0 || j < 0) return 0;
        return static_cast<Flags>(i * static_cast<int>(bins) + j) + 1;
    });
    h.counts.assign(bins, std::vector<std::uint64_t>(bins, 0));
    for (Flags fl : flags) {
        if (fl == 0) {
            ++h.out_of_domain;
            continue;
        }
        const unsigned cell = fl - 1;
        ++h.counts[cell / bins][cell % bins];
        ++h.in_domain;
    }
    h.empirical_mass.assign(bins, std::vector<long double>(bins, 0.0L));
    h.reference_mass.assign(bins, std::vector<long double>(bins, 0.0L));
    for (unsigned i = 0; i < bins; ++i) {
        const long double mi = st_mass(to_ld(h.edges[i]), to_ld(h.edges[i + 1]));
        for (unsigned j = 0; j < bins; ++j) {
            const long double mj = st_mass(to_ld(h.edges[j]), to_ld(h.edges[j + 1]));
            h.reference_mass[i][j] = mi * mj;
            if (h.in_domain > 0)
                h.empirical_mass[i][j] = static_cast<long double>(h.counts[i][j]) /
                                         static_cast<long double>(h.in_domain);
        }
    }
    h.meta.emplace_back("weights", std::to_string(F.weight) + "," + std::to_string(G.weight));
    h.meta.emplace_back("x", std::to_string(x));
    return h;
}

Histogram marginal_histogram(const IntegralForm& F, std::uint64_t x, unsigned bins,
                             const PrimeTable& pt, unsigned workers) {
    const int k = weight_index_of(F, "marginal_histogram");
    const auto ps = odd_primes_upto(pt, x);
    Histogram h;
    h.kind = "marginal-normalized-lift";
    h.bins = bins;
    h.edges = uniform_edges(bins);
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const int i = bin_of(F.coeffs.coeff(p), p, k, h.edges);
        return i < 0 ? 0 : static_cast<Flags>(i) + 1;
    });
    h.counts.assign(bins, 0);
    for (Flags fl : flags) {
        if (fl == 0)
            ++h.out_of_domain;
        else {
            ++h.counts[fl - 1];
            ++h.in_domain;
        }
    }
    h.empirical_mass.assign(bins, 0.0L);
    h.reference_mass.assign(bins, 0.0L);
    for (unsigned i = 0; i < bins; ++i) {
        h.reference_mass[i] = st_mass(to_ld(h.edges[i]), to_ld(h.edges[i + 1]));
        if (h.in_domain > 0)
            h.empirical_mass[i] = static_cast<long double>(h.counts[i]) /
                                  static_cast<long double>(h.in_domain);
    }
    h.meta.emplace_back("weight", std::to_string(F.weight));
    h.meta.emplace_back("x", std::to_string(x));
    return h;
}

DensityReport joint_interval_density(const LiftedEigenform& e1, const LiftedEigenform& e2,
                             std::uint64_t x, const Interval& I1, const Interval& I2,
                             const PrimeTable& pt, unsigned workers) {
    const auto ps = odd_primes_upto(pt, x);
    const int k1 = e1.f.k, k2 = e2.f.k;
    constexpr Flags kIn = 1, kOor = 2;
    const Rational minus_one(-1), plus_one(1);
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const Rational a1(e1.half_coeff_at(p));
        const Rational a2(e2.half_coeff_at(p));
        Flags fl = 0;
        if (compare_normalized(a1, p, k1, I1.lo) >= 0 &&
            compare_normalized(a1, p, k1, I1.hi) <= 0 &&
            compare_normalized(a2, p, k2, I2.lo) >= 0 &&
            compare_normalized(a2, p, k2, I2.hi) <= 0)
            fl |= kIn;
        if (compare_normalized(a1, p, k1, minus_one) < 0 ||
            compare_normalized(a1, p, k1, plus_one) > 0 ||
            compare_normalized(a2, p, k2, minus_one) < 0 ||
            compare_normalized(a2, p, k2, plus_one) > 0)
            fl |= kOor;
        return fl;
    });
    const long double ref = I1.reference_mass() * I2.reference_mass();
    DensityReport rep =
        tally_report("joint-interval-density", x, pt, {2},
                     {{"in-I1xI2", kIn, ref}, {"out-of-range", kOor, 0.0L}}, ps, flags);
    rep.meta.emplace_back("I1", I1.lo.get_str() + ".." + I1.hi.get_str());
    rep.meta.emplace_back("I2", I2.lo.get_str() + ".." + I2.hi.get_str());
    rep.meta.emplace_back("forms", "weights " + weight_label(e1.f) + " and " +
                                       weight_label(e2.f));
    return rep;
}

DensityReport natural_density_curve(const std::function<bool(std::uint64_t)>& pred,
                                    const std::vector<std::uint64_t>& checkpoints,
                                    const PrimeTable& pt) {
    if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("natural_density_curve: checkpoints must be "
                                    "nonempty and ascending");
    const std::uint64_t x = checkpoints.back();
    if (x > pt.limit())
        throw std::invalid_argument("natural_density_curve: checkpoint beyond table");
    DensityReport rep;
    rep.kind = "natural-density";
    rep.checkpoints = checkpoints;
    DensitySeries ds;
    ds.name = "member";
    std::size_t ci = 0;
    std::uint64_t run = 0;
    for (std::uint64_t p : pt.primes()) {
        if (p > x) break;
        while (p > checkpoints[ci]) {
            ds.counts.push_back(run);
            ++ci;
        }
        if (pred(p)) ++run;
    }
    while (ds.counts.size() < checkpoints.size()) ds.counts.push_back(run);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        rep.pi_values.push_back(pt.count_upto(checkpoints[i]));
        rep.excluded_counts.push_back(0);
        const std::uint64_t denom = rep.pi_values[i];
        ds.ratios.push_back(denom == 0 ? 0.0L
                                       : static_cast<long double>(ds.counts[i]) /
                                             static_cast<long double>(denom));
    }
    rep.series.push_back(std::move(ds));
    return rep;
}

AnalyticDensityReport analytic_density_estimate(
    const std::function<bool(std::uint64_t)>& pred,
    const std::vector<long double>& s_list, std::uint64_t p_max,
    const PrimeTable& pt) {
    if (p_max < 2 || p_max > pt.limit())
        throw std::invalid_argument("analytic_density_estimate: p_max out of range");
    AnalyticDensityReport rep;
    rep.p_max = p_max;
    for (long double s : s_list) {
        if (!(s > 1.0L && s <= 2.0L))
            throw std::invalid_argument(
                "analytic_density_estimate: s values must lie in (1, 2]");
        AnalyticEstimate est;
        est.s = s;
        long double acc = 0.0L;
        for (std::uint64_t p : pt.primes()) {
            if (p > p_max) break;
            if (pred(p)) acc += std::pow(static_cast<long double>(p), -s);
        }
        est.partial_sum = acc;
        est.normalizer = std::log(1.0L / (s - 1.0L));
        est.estimate = est.normalizer > 0.0L ? acc / est.normalizer
                                             : std::numeric_limits<long double>::infinity();
        rep.rows.push_back(est);
    }
    rep.meta.emplace_back("p_max", std::to_string(p_max));
    rep.meta.emplace_back("note", "truncated partial sums; estimator biased low");
    return rep;
}

DisagreementReport sign_disagreement_report(const LiftedEigenform& e1,
                                            const LiftedEigenform& e2, std::uint64_t x,
                                            const PrimeTable& pt, unsigned workers) {
    const auto ps = odd_primes_upto(pt, x);
    constexpr Flags kDis = 1, kZero = 2;
    auto flags = classify_primes(ps, workers, [&](std::uint64_t p) -> Flags {
        const int s1 = sign(e1.half_coeff_at(p));
        const int s2 = sign(e2.half_coeff_at(p));
        if (s1 == 0 || s2 == 0) return kZero;
        return s1 != s2 ? kDis : 0;
    });
    DisagreementReport rep;
    rep.density = tally_report("sign-disagreement", x, pt, {2},
                               {{"disagree", kDis, 0.5L}, {"zero-either", kZero, 0.0L}},
                               ps, flags);
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (flags[i] & kDis) rep.primes.push_back(ps[i]);
    const std::uint64_t count = rep.density.series[0].counts.back();
    const std::uint64_t denom = rep.density.denominator(rep.density.checkpoints.size() - 1);
    // Exact verdict: density > 6/25  <=>  25 * count > 6 * denom.
    rep.exceeds_threshold = 25 * count > 6 * denom;
    rep.density.meta.emplace_back("forms", "weights " + weight_label(e1.f) + " and " +
                                               weight_label(e2.f));
    rep.density.meta.emplace_back("threshold", "6/25");
    rep.density.meta.emplace_back("exceeds_threshold",
                                  rep.exceeds_threshold ? "true" : "false");
    return rep;
}

} // namespace halfint
