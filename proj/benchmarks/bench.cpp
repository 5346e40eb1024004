#include <benchmark/benchmark.h>

#include "noma/gamma_search.hpp"
#include "noma/rng.hpp"

namespace {

noma::SystemModel random_system(int n, std::uint64_t seed) {
    std::mt19937_64 rng = noma::substream(seed, 0);
    noma::Matrix h(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            h(r, c) = noma::standard_complex_gaussian(rng);
        }
    }
    return noma::SystemModel(std::move(h), noma::RVector::Ones(n), 0.5);
}

void bm_rates_closed_form(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const noma::SystemModel sys = random_system(n, 42);
    const noma::GammaVector g = noma::GammaVector::ones(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(noma::rates_closed_form(sys, g));
    }
}
BENCHMARK(bm_rates_closed_form)->Arg(4)->Arg(16)->Arg(64);

void bm_phi(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const noma::SystemModel sys = random_system(n, 43);
    const noma::RVector v = noma::RVector::Constant(n, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(noma::phi(sys, v));
    }
}
BENCHMARK(bm_phi)->Arg(4)->Arg(16)->Arg(64);

void bm_sum_capacity(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const noma::SystemModel sys = random_system(n, 44);
    for (auto _ : state) {
        benchmark::DoNotOptimize(noma::sum_capacity(sys));
    }
}
BENCHMARK(bm_sum_capacity)->Arg(4)->Arg(16)->Arg(64);

void bm_search_gamma(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const noma::SystemModel sys = random_system(n, 45);
    std::mt19937_64 rng = noma::substream(46, 0);
    std::uniform_real_distribution<double> u(std::log(1e-1), std::log(1e1));
    noma::RVector g(n);
    for (int i = 0; i < n; ++i) g[i] = std::exp(u(rng));
    g /= g[0];
    const noma::RatePoint target = noma::rates_closed_form(sys, noma::GammaVector(g));
    noma::SearchConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(noma::search_gamma(sys, target, cfg));
    }
}
BENCHMARK(bm_search_gamma)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
