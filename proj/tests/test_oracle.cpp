#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "halfint/oracle.hpp"

using namespace halfint;

TEST_CASE("counter RNG is a pure function of (seed, index)") {
    CHECK(counter_rng_u64(42, 0) == counter_rng_u64(42, 0));
    CHECK(counter_rng_u64(42, 0) != counter_rng_u64(42, 1));
    CHECK(counter_rng_u64(42, 0) != counter_rng_u64(43, 0));
    // out-of-order access reproduces in-order values
    std::vector<std::uint64_t> forward;
    for (std::uint64_t i = 0; i < 16; ++i) forward.push_back(counter_rng_u64(7, i));
    for (std::uint64_t i = 16; i-- > 0;) CHECK(counter_rng_u64(7, i) == forward[i]);
    const double u = counter_rng_unit(42, 5);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("uniform units fill [0,1) evenly") {
    const std::size_t n = 200000;
    double sum = 0.0;
    std::size_t low = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = counter_rng_unit(123, i);
        sum += u;
        if (u < 0.5) ++low;
    }
    CHECK(std::fabs(sum / n - 0.5) < 0.005);
    CHECK(std::fabs(static_cast<double>(low) / n - 0.5) < 0.005);
}

TEST_CASE("semicircle CDF endpoints, symmetry, monotonicity") {
    CHECK(semicircle_cdf(-1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(semicircle_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(semicircle_cdf(-2.0) == 0.0);  // clamped outside the support
    CHECK(semicircle_cdf(2.0) == 1.0);
    double prev = -1.0;
    for (int i = -20; i <= 20; ++i) {
        const double c = semicircle_cdf(i / 20.0);
        CHECK(c >= prev);
        prev = c;
        CHECK(semicircle_cdf(i / 20.0) + semicircle_cdf(-i / 20.0) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("inverse CDF inverts the CDF to tight tolerance") {
    for (int i = 0; i <= 100; ++i) {
        const double u = i / 100.0;
        const double t = semicircle_inverse_cdf(u);
        CHECK(t >= -1.0);
        CHECK(t <= 1.0);
        CHECK(std::fabs(semicircle_cdf(t) - u) <= 1e-10);
    }
    CHECK(semicircle_inverse_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(semicircle_inverse_cdf(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(semicircle_inverse_cdf(1.1), std::invalid_argument);
}

TEST_CASE("semicircle samples reproduce the measure's moments") {
    const std::size_t n = 1000000;
    std::vector<double> xs = sample_semicircle(n, 1);
    REQUIRE(xs.size() == n);
    double sum = 0.0, sumsq = 0.0;
    std::size_t nonneg = 0;
    for (double x : xs) {
        sum += x;
        sumsq += x * x;
        if (x >= 0.0) ++nonneg;
    }
    CHECK(std::fabs(sum / n) < 0.002);                      // mean 0
    CHECK(std::fabs(sumsq / n - 0.25) < 0.005);             // variance 1/4
    CHECK(std::fabs(static_cast<double>(nonneg) / n - 0.5) < 0.002);  // mass of [0,1]
    // deterministic: same seed, same stream
    std::vector<double> again = sample_semicircle(100, 1);
    for (std::size_t i = 0; i < 100; ++i) CHECK(again[i] == xs[i]);
}

TEST_CASE("first odd primes") {
    CHECK(first_odd_primes(5) == std::vector<std::uint64_t>{3, 5, 7, 11, 13});
    std::vector<std::uint64_t> many = first_odd_primes(10000);
    CHECK(many.size() == 10000);
    CHECK(many.front() == 3);
    for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i - 1] < many[i]);
    // cross-check the tail against an independent sieve
    PrimeTable pt(many.back());
    std::vector<std::uint64_t> expected(pt.primes().begin() + 1, pt.primes().end());
    CHECK(many == expected);
}

TEST_CASE("product-sign simulation: density near 1/2 in both modes") {
    SamplerConfig cfg;
    cfg.sample_count = 200000;
    cfg.seed = 7;
    cfg.shift_mode = ShiftMode::none;
    DensityReport plain = simulate_product_signs(cfg);
    CHECK(plain.kind == "simulated-product-signs");
    REQUIRE(plain.series.size() == 1);
    CHECK(plain.series[0].name == "product-negative");
    CHECK(std::fabs(static_cast<double>(plain.series[0].ratios.back()) - 0.5) < 0.01);

    cfg.shift_mode = ShiftMode::per_prime;
    DensityReport shifted = simulate_product_signs(cfg);
    REQUIRE(shifted.series.size() == 2);
    CHECK(shifted.series[1].name == "near-zero-window");
    CHECK(std::fabs(static_cast<double>(shifted.series[0].ratios.back()) - 0.5) < 0.01);
    CHECK(shifted.series[1].ratios.back() <= 0.01L);
}

TEST_CASE("simulation reports are worker-count invariant and name their stream") {
    SamplerConfig a;
    a.sample_count = 100000;
    a.seed = 99;
    a.shift_mode = ShiftMode::per_prime;
    a.workers = 1;
    SamplerConfig b = a;
    b.workers = 8;
    DensityReport ra = simulate_product_signs(a);
    DensityReport rb = simulate_product_signs(b);
    CHECK(ra.checkpoints == rb.checkpoints);
    REQUIRE(ra.series.size() == rb.series.size());
    for (std::size_t i = 0; i < ra.series.size(); ++i) {
        CHECK(ra.series[i].counts == rb.series[i].counts);
        CHECK(ra.series[i].ratios == rb.series[i].ratios);
    }
    CHECK(ra.meta == rb.meta);  // no worker count leaks into the report
    bool has_rng = false, has_workers = false;
    for (const auto& [key, value] : ra.meta) {
        if (key == "rng") {
            has_rng = true;
            CHECK(value == "splitmix64-counter");
        }
        if (key.find("worker") != std::string::npos) has_workers = true;
    }
    CHECK(has_rng);
    CHECK_FALSE(has_workers);
}

TEST_CASE("simulation validates its sample count") {
    SamplerConfig cfg;
    cfg.sample_count = 1;
    CHECK_THROWS_AS(static_cast<void>(simulate_product_signs(cfg)), std::invalid_argument);
}
