#include <benchmark/benchmark.h>

#include "rrsvd/mps.hpp"
#include "rrsvd/randomized.hpp"
#include "rrsvd/tebd.hpp"

using namespace rrsvd;
using namespace rrsvd::tebd;

namespace {

// Three-site state with a large central bond, for two-site update profiling.
MpsState wide_state(std::size_t d, std::size_t chi) {
    MpsState state;
    state.site_dims = {d, d};
    Tensor3 g1(chi, d, chi), g2(chi, d, chi);
    const DenseMatrix r1 = gaussian_test_matrix(chi * d, chi, 1);
    const DenseMatrix r2 = gaussian_test_matrix(chi * d, chi, 2);
    for (std::size_t a = 0; a < chi; ++a)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t b = 0; b < chi; ++b) {
                g1.at(a, i, b) = r1(a * d + i, b);
                g2.at(a, i, b) = r2(b * d + i, a);
            }
    state.gammas = {std::move(g1), std::move(g2)};
    std::vector<double> lambda(chi, 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < chi; ++i) {
        lambda[i] = 1.0 / static_cast<double>(i + 1);
        norm += lambda[i] * lambda[i];
    }
    for (double& l : lambda) l /= std::sqrt(norm);
    state.lambdas = {std::move(lambda)};
    // Outer bonds are open (dimension chi) but carry no lambdas in this
    // two-site fragment; build_theta treats them as boundaries.
    return state;
}

}  // namespace

static void BM_BuildTheta(benchmark::State& state) {
    const MpsState mps = wide_state(static_cast<std::size_t>(state.range(0)),
                                    static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(build_theta(mps, 0));
}
BENCHMARK(BM_BuildTheta)->Args({4, 64})->Args({9, 100})->Unit(benchmark::kMillisecond);

static void BM_Decimate(benchmark::State& state) {
    const MpsState mps = wide_state(static_cast<std::size_t>(state.range(0)),
                                    static_cast<std::size_t>(state.range(1)));
    const ThetaTensor theta = build_theta(mps, 0);
    const bool randomized = state.range(2) != 0;
    for (auto _ : state) {
        DecimationBackend backend;
        if (randomized) {
            backend.kind = DecimationBackend::Kind::Randomized;
            backend.target_rank = static_cast<std::size_t>(state.range(1));
            backend.det_crossover = 0;
        }
        benchmark::DoNotOptimize(
            decimate(theta, {}, {}, static_cast<std::size_t>(state.range(1)), 0.0, backend));
    }
}
BENCHMARK(BM_Decimate)
    ->Args({4, 64, 0})
    ->Args({4, 64, 1})
    ->Args({9, 100, 0})
    ->Args({9, 100, 1})
    ->Unit(benchmark::kMillisecond);
