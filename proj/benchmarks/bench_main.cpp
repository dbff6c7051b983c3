#include <cstdint>

#include <benchmark/benchmark.h>

#include "halfint/arith.hpp"
#include "halfint/oracle.hpp"
#include "halfint/qseries.hpp"
#include "halfint/shimura.hpp"
#include "halfint/spaces.hpp"
#include "halfint/stats.hpp"

using namespace halfint;

namespace {

void bm_qseries_mul(benchmark::State& state) {
    const auto prec = static_cast<std::size_t>(state.range(0));
    QSeries a = eisenstein_series(4, prec);
    QSeries b = delta_series(prec);
    for (auto _ : state) {
        QSeries c = a * b;
        benchmark::DoNotOptimize(c);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_qseries_mul)->Arg(500)->Arg(2000)->Arg(8000)->Complexity();

void bm_theta_mul(benchmark::State& state) {
    const auto prec = static_cast<std::size_t>(state.range(0));
    QSeries th = theta_series(prec);
    QSeries f = f2_series(prec);
    for (auto _ : state) {
        QSeries c = th * f;  // sparse factor drives the outer loop
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(bm_theta_mul)->Arg(2000)->Arg(8000)->Arg(32000);

void bm_delta_series(benchmark::State& state) {
    const auto prec = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        QSeries d = delta_series(prec);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bm_delta_series)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_prime_sieve(benchmark::State& state) {
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        PrimeTable pt(limit);
        benchmark::DoNotOptimize(pt.primes().size());
    }
}
BENCHMARK(bm_prime_sieve)->Arg(10000)->Arg(100000)->Arg(1000000);

void bm_space_build(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SpaceBasis space = plus_cusp_space(k, 400);
        benchmark::DoNotOptimize(space.dimension());
    }
}
BENCHMARK(bm_space_build)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_fast_reexpansion(benchmark::State& state) {
    const auto prec = static_cast<std::size_t>(state.range(0));
    SpaceBasis space = plus_cusp_space(6, 400);
    HalfIntegralForm f = normalize_at_t(eigenbasis(space, {3}).front());
    for (auto _ : state) {
        HalfIntegralForm g = extend_precision(f, prec);
        benchmark::DoNotOptimize(g.coeffs.precision());
    }
}
BENCHMARK(bm_fast_reexpansion)->Arg(10001)->Arg(40001)->Unit(benchmark::kMillisecond);

void bm_prop1_tally(benchmark::State& state) {
    const unsigned workers = static_cast<unsigned>(state.range(0));
    static const PrimeTable pt(10000);
    static const LiftedEigenform e = build_desk_eigenform(6, 10000);
    for (auto _ : state) {
        DensityReport rep = sign_exception_ratio(e, 10000, pt, workers);
        benchmark::DoNotOptimize(rep.series[0].counts.back());
    }
}
BENCHMARK(bm_prop1_tally)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_sampler(benchmark::State& state) {
    SamplerConfig cfg;
    cfg.sample_count = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 42;
    cfg.shift_mode = ShiftMode::per_prime;
    cfg.workers = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        DensityReport rep = simulate_product_signs(cfg);
        benchmark::DoNotOptimize(rep.series[0].counts.back());
    }
}
BENCHMARK(bm_sampler)->Args({100000, 1})->Args({100000, 4})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
