#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfint/arith.hpp"
#include "halfint/hecke.hpp"
#include "halfint/spaces.hpp"

namespace halfint {

// Mass of [a, b] under the semicircle measure (2/pi) sqrt(1 - t^2) dt,
// via the closed form (1/pi)[arcsin t + t sqrt(1 - t^2)] evaluated at the
// endpoints.  Throws std::invalid_argument unless -1 <= a <= b <= 1.
long double st_mass(long double a, long double b);

// A closed rational subinterval of [-1, 1] (endpoints included).
struct Interval {
    Rational lo;
    Rational hi;

    Interval(Rational lo_, Rational hi_);
    long double reference_mass() const;  // st_mass over the interval
};

// One named event series tallied over primes: cumulative counts per
// checkpoint, the corresponding ratios, and an optional reference density.
struct DensitySeries {
    std::string name;
    std::vector<std::uint64_t> counts;
    std::vector<long double> ratios;
    std::optional<long double> reference;
};

struct DensityReport {
    std::string kind;                               // e.g. "sign-exceptions"
    std::vector<std::uint64_t> checkpoints;         // ascending x values
    std::vector<std::uint64_t> pi_values;           // pi(x) per checkpoint
    std::vector<std::uint64_t> excluded_counts;     // excluded primes <= x
    std::vector<std::uint64_t> excluded_primes;     // the excluded set
    std::vector<DensitySeries> series;
    std::vector<std::pair<std::string, std::string>> meta;  // ordered key=value

    // Ratio denominator at checkpoint i: pi_values[i] - excluded_counts[i].
    std::uint64_t denominator(std::size_t i) const {
        return pi_values.at(i) - excluded_counts.at(i);
    }
};

// Histogram over [-1, 1] with exact rational bin edges.  Bin i covers
// [edges[i], edges[i+1]), except the last bin which is closed on the right.
// Values outside [-1, 1] are tallied as out_of_domain only.
struct Histogram {
    std::string kind;
    unsigned bins = 0;
    std::vector<Rational> edges;                  // bins + 1 entries
    std::vector<std::uint64_t> counts;            // per bin
    std::vector<long double> empirical_mass;      // counts / in_domain
    std::vector<long double> reference_mass;      // st_mass per bin
    std::uint64_t in_domain = 0;
    std::uint64_t out_of_domain = 0;
    std::vector<std::pair<std::string, std::string>> meta;
};

// Joint histogram over [-1, 1]^2; cell (i, j) pairs bin i of the first
// coordinate with bin j of the second.
struct JointHistogram {
    std::string kind;
    unsigned bins = 0;
    std::vector<Rational> edges;                           // bins + 1
    std::vector<std::vector<std::uint64_t>> counts;        // bins x bins
    std::vector<std::vector<long double>> empirical_mass;  // / in_domain
    std::vector<std::vector<long double>> reference_mass;  // product masses
    std::uint64_t in_domain = 0;
    std::uint64_t out_of_domain = 0;
    std::vector<std::pair<std::string, std::string>> meta;

    long double max_abs_deviation() const;
};

// Per-prime sign data for a pair of eigenforms, source-labelled.
struct SignSequence {
    std::vector<std::uint64_t> primes;
    std::vector<int> signs;  // in {-1, 0, +1}
    std::string source;
};

// A normalized half-integral eigenform together with its lift carried to
// the depth the prime statistics need.  The lift is never taken on faith:
// build_desk_eigenform recomputes the divisor sum on the full overlap the
// shallow expansion supports and aborts on any mismatch.
struct LiftedEigenform {
    HalfIntegralForm f;             // normalized at t
    IntegralForm lift;              // coefficients A(n), n < lift precision
    std::size_t verified_overlap = 0;  // # lift coefficients cross-checked

    // a(t p^2) / a(t) = A(p) - chi1(p) p^{k-1}, exact.
    Integer half_coeff_at(std::uint64_t p) const;
    // A(p), exact.
    Integer lift_coeff_at(std::uint64_t p) const;
};

// Construct the unique desk-scale eigenform for weight index k (the spaces
// with one-dimensional plus-cusp part), normalized, with its lift extended
// to indices >= x via the weight-2k level-1 eigenform expansion and
// cross-verified on the overlap.  shallow_prec controls the space build.
LiftedEigenform build_desk_eigenform(int k, std::uint64_t x,
                                     std::size_t shallow_prec = 400);

// Checkpoints: powers of 10 up to x, with x itself appended when it is not
// a power of 10.  (x = 10^4 -> {10, 100, 1000, 10000}.)
std::vector<std::uint64_t> checkpoint_ladder(std::uint64_t x);

// ---- prime statistics -------------------------------------------------
// All sign and interval decisions below are made on exact integers; the
// long double fields carry display values only.  Prime ranges may be
// partitioned across `workers` threads; per-prime contributions merge by
// integer addition, so results are identical for every worker count.

// Fraction of odd primes p <= x where a(tp^2) and A(p) have strictly
// opposite signs (zero coefficients are tallied separately, never counted
// as disagreements).  Every disagreement is certified exactly: it must be
// the boundary window  chi1(p) A(p) in (0, p^{k-1})  predicted by the
// prime coefficient relation, else VerificationError.
DensityReport sign_exception_ratio(const LiftedEigenform& e, std::uint64_t x,
                                    const PrimeTable& pt, unsigned workers = 1);

// Exact sign partition of a(tp^2) b(tp^2) over odd primes p <= x:
// series "<0", ">0", "=0", "<=0", ">=0" with references 1/2, 1/2, 0, 1/2,
// 1/2.  The partition identity  (<0) + (>0) + (=0) = pi'(x)  is asserted.
DensityReport product_sign_counts(const LiftedEigenform& e1,
                                  const LiftedEigenform& e2, std::uint64_t x,
                                  const PrimeTable& pt, unsigned workers = 1);

// Joint equidistribution of the pair of NORMALIZED LIFT values
// (A(p)/2p^{k1-1/2}, B(p)/2p^{k2-1/2}) against the product semicircle
// reference.  Both coordinates are Deligne-bounded, so out_of_domain
// stays 0 for genuine eigenform lifts.
JointHistogram joint_histogram(const IntegralForm& F, const IntegralForm& G,
                               std::uint64_t x, unsigned bins,
                               const PrimeTable& pt, unsigned workers = 1);

// Marginal histogram of A(p)/2p^{k-1/2} for a single lift.
Histogram marginal_histogram(const IntegralForm& F, std::uint64_t x,
                             unsigned bins, const PrimeTable& pt,
                             unsigned workers = 1);

// Density of odd primes p <= x whose pair of normalized HALF-INTEGRAL
// values (a(tp^2)/2p^{k1-1/2}, b(tp^2)/2p^{k2-1/2}) lies in I1 x I2,
// against the reference st_mass(I1) st_mass(I2).  A second series
// "out_of_range" counts primes where either value leaves [-1, 1] (the
// spill-over is at most 1/(2 sqrt p), reported, never clamped).
DensityReport joint_interval_density(const LiftedEigenform& e1, const LiftedEigenform& e2,
                             std::uint64_t x, const Interval& I1, const Interval& I2,
                             const PrimeTable& pt, unsigned workers = 1);

// Ratio #{p <= x_i : pred(p)} / pi(x_i) at each checkpoint (no exclusions).
DensityReport natural_density_curve(const std::function<bool(std::uint64_t)>& pred,
                                    const std::vector<std::uint64_t>& checkpoints,
                                    const PrimeTable& pt);

// Truncated analytic density estimates sum_{p in S, p <= p_max} p^{-s}
// divided by log(1/(s-1)), per s.  Truncation is mandatory and reported;
// the estimator is biased low and no extrapolation is applied.
struct AnalyticEstimate {
    long double s = 0.0L;
    long double partial_sum = 0.0L;  // sum of p^{-s} over S up to p_max
    long double normalizer = 0.0L;   // log(1/(s-1))
    long double estimate = 0.0L;     // partial_sum / normalizer
};
struct AnalyticDensityReport {
    std::vector<AnalyticEstimate> rows;
    std::uint64_t p_max = 0;
    std::vector<std::pair<std::string, std::string>> meta;
};
AnalyticDensityReport analytic_density_estimate(
    const std::function<bool(std::uint64_t)>& pred,
    const std::vector<long double>& s_list, std::uint64_t p_max,
    const PrimeTable& pt);

// All odd primes p <= x where a(tp^2) and b(tp^2) have strictly opposite
// signs, with the running density and an exact verdict against the 6/25
// multiplicity-one threshold (25 * count > 6 * denominator).
struct DisagreementReport {
    std::vector<std::uint64_t> primes;   // the disagreement set
    DensityReport density;               // series "disagree" (+ "zero-either")
    Rational threshold{6, 25};
    bool exceeds_threshold = false;      // exact comparison at the final x
};
DisagreementReport sign_disagreement_report(const LiftedEigenform& e1,
                                            const LiftedEigenform& e2,
                                            std::uint64_t x, const PrimeTable& pt,
                                            unsigned workers = 1);

} // namespace halfint
