#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "halfint/stats.hpp"

namespace halfint {

// ---- counter-mode pseudo-randomness ------------------------------------
// Draw i of a stream is a pure function of (seed, i) — the splitmix64
// finalizer applied to seed + (i+1) * golden-gamma.  There is no generator
// state, so any partition of the index range across workers reproduces the
// identical stream, which is what makes the sampler's reports byte-stable
// at every worker count.
std::uint64_t counter_rng_u64(std::uint64_t seed, std::uint64_t index);
// Uniform draw in [0, 1) using the top 53 bits.
double counter_rng_unit(std::uint64_t seed, std::uint64_t index);

// CDF of the semicircle measure: mass of [-1, t].
double semicircle_cdf(double t);
// Inverse CDF by bisection; |CDF(result) - u| <= 1e-12 for u in [0, 1].
double semicircle_inverse_cdf(double u);

// n i.i.d. semicircle draws; draw i consumes stream index i.
std::vector<double> sample_semicircle(std::size_t n, std::uint64_t seed);

// per_prime attaches sample i to the i-th odd prime p and applies the
// +-1/(2 sqrt p) shift the prime coefficient relation predicts; none draws
// plain independent pairs.
enum class ShiftMode { none, per_prime };

struct SamplerConfig {
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    ShiftMode shift_mode = ShiftMode::none;
    unsigned workers = 1;
};

// Pair simulation of the product-sign law: draws independent semicircle
// pairs (c, d) (stream indices 4i..4i+3: value, value, sign, sign) and
// declares the product negative when (c - chi1/(2 sqrt p))(d - chi2/(2
// sqrt p)) < 0 in per_prime mode, or plainly c d < 0 in none mode.
// per_prime adds a "near-zero-window" series counting |c| < 1/(2 sqrt p).
// Checkpoints ladder over the sample count; the pi column carries the
// number of samples.  The report names the generator in its meta.
DensityReport simulate_product_signs(const SamplerConfig& cfg);

// The first n odd primes (sieve grown as needed).
std::vector<std::uint64_t> first_odd_primes(std::size_t n);

} // namespace halfint
