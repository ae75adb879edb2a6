#include <benchmark/benchmark.h>

#include "rrsvd/matgen.hpp"
#include "rrsvd/randomized.hpp"

using namespace rrsvd;

static void BM_FixedRank(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t q = static_cast<std::size_t>(state.range(1));
    const StructuredInstance inst =
        structured_matrix(spectrum_exponential(n, 0.95), n, 10, 11);
    for (auto _ : state)
        benchmark::DoNotOptimize(rrsvd_fixed_rank(inst.matrix, {50, 50, q, 77}));
}
BENCHMARK(BM_FixedRank)
    ->Args({512, 0})
    ->Args({512, 2})
    ->Args({900, 2})
    ->Args({900, 6})
    ->Unit(benchmark::kMillisecond);

static void BM_RangeFinder(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const StructuredInstance inst =
        structured_matrix(spectrum_exponential(n, 0.95), n, 12, 13);
    for (auto _ : state)
        benchmark::DoNotOptimize(randomized_range_finder(inst.matrix, 100, 2, 5));
}
BENCHMARK(BM_RangeFinder)->Arg(512)->Arg(900)->Unit(benchmark::kMillisecond);
