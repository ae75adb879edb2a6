#include <benchmark/benchmark.h>

#include "rrsvd/linalg.hpp"
#include "rrsvd/randomized.hpp"

using namespace rrsvd;

static void BM_Matmul(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_test_matrix(n, n, 1);
    const DenseMatrix b = gaussian_test_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_Qr(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_test_matrix(2 * n, n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(qr(a));
}
BENCHMARK(BM_Qr)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_SvdFull(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_test_matrix(n, n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(svd_full(a));
}
BENCHMARK(BM_SvdFull)->Arg(256)->Arg(512)->Arg(900)->Unit(benchmark::kMillisecond);
