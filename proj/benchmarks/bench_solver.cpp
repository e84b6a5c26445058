#include <benchmark/benchmark.h>

#include "qpwalk/qpwalk.hpp"

namespace {

void BM_StabilityVerdict(benchmark::State& state) {
    auto st = qpwalk::random_valid_stencil(17);
    for (auto _ : state) benchmark::DoNotOptimize(qpwalk::is_ergodic(st));
}
BENCHMARK(BM_StabilityVerdict);

void BM_SolveLadder(benchmark::State& state) {
    auto sys = qpwalk::build_kernel_system(qpwalk::jsq_stencil(0.1 * static_cast<double>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(qpwalk::solve_ladder(sys));
}
BENCHMARK(BM_SolveLadder)->Arg(3)->Arg(5)->Arg(9)->Unit(benchmark::kMicrosecond);

void BM_PointEvaluation(benchmark::State& state) {
    auto sol = qpwalk::solve(qpwalk::jsq_stencil(0.7));
    int n = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sol.pi(n % 20 + 1, n % 7 + 1));
        ++n;
    }
}
BENCHMARK(BM_PointEvaluation);

void BM_BuildRN(benchmark::State& state) {
    auto sol = qpwalk::solve(qpwalk::jsq_stencil(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(qpwalk::build_RN(sol, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildRN)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_TruncatedChain(benchmark::State& state) {
    auto st = qpwalk::jsq_stencil(0.5);
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qpwalk::stationary(qpwalk::build_truncated(st, L)));
}
BENCHMARK(BM_TruncatedChain)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
