#include "halfint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "halfint/errors.hpp"

namespace halfint {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace

std::uint64_t counter_rng_u64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * kGoldenGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double counter_rng_unit(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_rng_u64(seed, index) >> 11) * 0x1.0p-53;
}

double semicircle_cdf(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 0.5 + (std::asin(t) + t * std::sqrt(1.0 - t * t)) / kPi;
}

double semicircle_inverse_cdf(double u) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("semicircle_inverse_cdf: u must be in [0, 1]");
    double lo = -1.0, hi = 1.0;
    // The CDF derivative is (2/pi) sqrt(1 - t^2) <= 2/pi, so interval width
    // 1e-13 forces a CDF error well under 1e-12; 64 halvings reach 2^-63.
    for (int it = 0; it < 64 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (semicircle_cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sample_semicircle(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_semicircle: need n >= 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = semicircle_inverse_cdf(counter_rng_unit(seed, i));
    return out;
}

std::vector<std::uint64_t> first_odd_primes(std::size_t n) {
    if (n < 1) throw std::invalid_argument("first_odd_primes: need n >= 1");
    // p_m ~ m (ln m + ln ln m) for the m-th prime; pad and regrow if short.
    double m = static_cast<double>(n + 1);
    if (m < 6.0) m = 6.0;
    std::uint64_t bound =
        static_cast<std::uint64_t>(m * (std::log(m) + std::log(std::log(m)))) + 16;
    for (;;) {
        PrimeTable pt(bound);
        std::vector<std::uint64_t> odd;
        odd.reserve(n);
        for (std::uint64_t p : pt.primes()) {
            if (p == 2) continue;
            odd.push_back(p);
            if (odd.size() == n) return odd;
        }
        bound += bound / 2;
    }
}

DensityReport simulate_product_signs(const SamplerConfig& cfg) {
    if (cfg.sample_count < 2)
        throw std::invalid_argument("simulate_product_signs: need at least 2 samples");
    const std::uint64_t n = cfg.sample_count;
    const bool per_prime = cfg.shift_mode == ShiftMode::per_prime;

    std::vector<std::uint64_t> primes;
    if (per_prime) primes = first_odd_primes(static_cast<std::size_t>(n));

    // flag bits per sample
    constexpr std::uint8_t kNeg = 1, kWindow = 2;
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(n), 0);
    auto classify = [&](std::uint64_t i) -> std::uint8_t {
        const double c = semicircle_inverse_cdf(counter_rng_unit(cfg.seed, 4 * i));
        const double d = semicircle_inverse_cdf(counter_rng_unit(cfg.seed, 4 * i + 1));
        std::uint8_t fl = 0;
        if (per_prime) {
            const double s =
                0.5 / std::sqrt(static_cast<double>(primes[static_cast<std::size_t>(i)]));
            const double ch1 = counter_rng_unit(cfg.seed, 4 * i + 2) < 0.5 ? 1.0 : -1.0;
            const double ch2 = counter_rng_unit(cfg.seed, 4 * i + 3) < 0.5 ? 1.0 : -1.0;
            if ((c - ch1 * s) * (d - ch2 * s) < 0.0) fl |= kNeg;
            if (std::fabs(c) < s) fl |= kWindow;
        } else {
            if (c * d < 0.0) fl |= kNeg;
        }
        return fl;
    };

    const unsigned n_workers = std::max(
        1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::min<std::uint64_t>(
                                                n, 1024))));
    if (n_workers == 1) {
        for (std::uint64_t i = 0; i < n; ++i)
            flags[static_cast<std::size_t>(i)] = classify(i);
    } else {
        std::vector<std::exception_ptr> errors(n_workers);
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            const std::uint64_t lo = n * w / n_workers;
            const std::uint64_t hi = n * (w + 1) / n_workers;
            pool.emplace_back([&, lo, hi, w]() {
                try {
                    for (std::uint64_t i = lo; i < hi; ++i)
                        flags[static_cast<std::size_t>(i)] = classify(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    DensityReport rep;
    rep.kind = "simulated-product-signs";
    rep.checkpoints = checkpoint_ladder(n);
    const std::size_t n_cp = rep.checkpoints.size();
    rep.pi_values = rep.checkpoints;  // the "pi" column counts samples here
    rep.excluded_counts.assign(n_cp, 0);

    std::vector<std::uint64_t> seg_neg(n_cp, 0), seg_win(n_cp, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto it = std::lower_bound(rep.checkpoints.begin(), rep.checkpoints.end(),
                                         i + 1);
        const std::size_t si = static_cast<std::size_t>(it - rep.checkpoints.begin());
        if (flags[static_cast<std::size_t>(i)] & kNeg) ++seg_neg[si];
        if (flags[static_cast<std::size_t>(i)] & kWindow) ++seg_win[si];
    }
    auto push_series = [&](const std::string& name, const std::vector<std::uint64_t>& seg,
                           long double ref) {
        DensitySeries ds;
        ds.name = name;
        ds.reference = ref;
        std::uint64_t run = 0;
        for (std::size_t i = 0; i < n_cp; ++i) {
            run += seg[i];
            ds.counts.push_back(run);
            ds.ratios.push_back(static_cast<long double>(run) /
                                static_cast<long double>(rep.checkpoints[i]));
        }
        rep.series.push_back(std::move(ds));
    };
    push_series("product-negative", seg_neg, 0.5L);
    if (per_prime) push_series("near-zero-window", seg_win, 0.0L);

    rep.meta.emplace_back("rng", "splitmix64-counter");
    rep.meta.emplace_back("seed", std::to_string(cfg.seed));
    rep.meta.emplace_back("samples", std::to_string(n));
    rep.meta.emplace_back("shift_mode", per_prime ? "per_prime" : "none");
    return rep;
}

} // namespace halfint
