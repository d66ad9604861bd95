#include <benchmark/benchmark.h>

#include "besselcall/mc.hpp"
#include "besselcall/pricing.hpp"
#include "besselcall/specfun.hpp"

using namespace besselcall;

static void BM_BesselI(benchmark::State& state) {
    double y = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_i(1.5, y, true));
        y = y < 500.0 ? y * 1.7 : 0.1;
    }
}
BENCHMARK(BM_BesselI);

static void BM_BesselK(benchmark::State& state) {
    double y = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k(1.3, y));
        y = y < 500.0 ? y * 1.7 : 0.1;
    }
}
BENCHMARK(BM_BesselK);

static void BM_RegLowerGamma(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::reg_lower_gamma(2.5, x));
        x = x < 50.0 ? x * 1.3 : 0.01;
    }
}
BENCHMARK(BM_RegLowerGamma);

static void BM_PriceClosed3(benchmark::State& state) {
    const ModelParams p = make_params(3.0, 2.0);
    double t = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pricing::price_bes3_closed(p, t));
        t = t < 1e3 ? t * 1.9 : 1e-3;
    }
}
BENCHMARK(BM_PriceClosed3);

static void BM_PriceIntegral(benchmark::State& state) {
    const ModelParams p = make_params(static_cast<double>(state.range(0)), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(pricing::price_general_integral(p, 1.0));
}
BENCHMARK(BM_PriceIntegral)->Arg(3)->Arg(5)->Arg(13);

static void BM_PriceLastPassage(benchmark::State& state) {
    const ModelParams p = make_params(5.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(pricing::price_via_last_passage(p, 1.0));
}
BENCHMARK(BM_PriceLastPassage);

static void BM_EndpointSample(benchmark::State& state) {
    mc::Philox rng(1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::sample_bessel_endpoint(5.0, 1.0, 1.0, rng));
}
BENCHMARK(BM_EndpointSample);

static void BM_HittingTime(benchmark::State& state) {
    mc::Philox rng(1, 0);
    mc::MCConfig cfg;
    cfg.path_step = 1e-3;
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::sample_hitting_time(3.0, 1.0, cfg, rng));
}
BENCHMARK(BM_HittingTime);

BENCHMARK_MAIN();
