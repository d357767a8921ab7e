#include <benchmark/benchmark.h>

#include "fv/identities.hpp"
#include "fv/random.hpp"
#include "fv/tasep.hpp"

using namespace fv;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_CauchySum(benchmark::State& state) {
    RationalSampler rng(7);
    const int M = 10, N = 4;
    std::vector<Rational> z, y;
    for (int j = 0; j < N; ++j) {
        z.push_back(rng.draw() + 3 * j);
        y.push_back(rng.draw() + 3 * j);
    }
    const Rational beta = make_rational(-2, 3);
    for (auto _ : state) benchmark::DoNotOptimize(cauchy_lhs(M, N, z, y, beta, mode(state)));
}

void BM_BetheSolve(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(bethe_solve(10, 5, -1.0, mode(state)).solutions.size());
}

void BM_BetheContinuation(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(bethe_solve(9, 4, -0.5, mode(state)).solutions.size());
}

void BM_GreenTable(benchmark::State& state) {
    const TasepSpectrum spec(8, 4, mode(state));
    const auto& configs = spec.configurations();
    for (auto _ : state) {
        double s = 0;
        for (const auto& x : configs) s += spec.green(x, configs.front(), 1.0);
        benchmark::DoNotOptimize(s);
    }
}

}  // namespace

BENCHMARK(BM_CauchySum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BetheSolve)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BetheContinuation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreenTable)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
