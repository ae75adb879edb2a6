#ifndef RRSVD_TOOLS_EXPERIMENTS_HPP
#define RRSVD_TOOLS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rrsvd/matgen.hpp"
#include "rrsvd/mps.hpp"

// Experiment drivers behind the CLI subcommands. Each returns a process exit
// code: 0 success, 2 usage, 3 simulation abort, 4 recurrence breakdown.

namespace rrsvd::bench {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAbort = 3;
constexpr int kExitBreakdown = 4;

// Parses "exp:RATIO", "power", or "file:PATH" into a spectrum of length n.
SpectrumSpec parse_spectrum(const std::string& text, std::size_t n);

struct MatgenConfig {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string spectrum = "power";
    std::uint64_t seed = 0;
    std::string out;
};
int run_matgen(const MatgenConfig& config);

struct SvdBenchConfig {
    std::vector<std::size_t> sizes;  // square sizes; ignored when rows/cols set
    std::size_t rows = 0, cols = 0;  // optional rectangular single size
    std::size_t k = 100, p = 100;
    std::vector<std::size_t> qs{2};
    std::size_t trials = 5;
    std::string spectrum = "exp:0.95";
    std::uint64_t seed = 1;
    int threads = 0;  // 0 keeps the BLAS default
    std::string out;
};
int run_svd_bench(const SvdBenchConfig& config);

struct StabilityConfig {
    std::size_t rows = 1500, cols = 750;
    std::size_t k = 50, p = 50;
    std::vector<std::size_t> qs{2, 4, 6};
    std::size_t instances = 1;
    std::size_t reruns = 20;
    std::string spectrum = "power";
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
};
int run_stability(const StabilityConfig& config);

struct TebdRunConfig {
    std::string model = "ising";  // ising | heisenberg | tedopa-chain
    std::string coeffs_file;      // for tedopa-chain
    std::size_t sites = 6;
    std::size_t chi = 32;
    double dt = 1e-3;
    std::size_t steps = 100;
    std::string backend = "det";  // det | rrsvd
    double epsilon = 0.0;         // > 0 enables the accuracy check
    std::size_t q = 2;
    std::size_t oversampling = 0;  // 0 mirrors chi
    std::size_t det_crossover = 256;
    double coupling = 1.0;
    double field = 1.0;
    double trunc_tolerance = 0.0;
    double abort_threshold = 1.0;
    std::size_t boson_dim = 4;
    double sys_epsilon = 1.0;
    double sys_delta = 1.0;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    std::string observables_out;
    std::string state_out;
};
int run_tebd(const TebdRunConfig& config);

struct ChainmapConfig {
    std::string measure_file;
    std::size_t n_chain = 0;
    std::string out;
};
int run_chainmap(const ChainmapConfig& config);

// Final-state container for tebd-run (binary, little-endian).
void write_mps_file(const std::string& path, const tebd::MpsState& state);
tebd::MpsState read_mps_file(const std::string& path);

void set_blas_threads(int threads);

}  // namespace rrsvd::bench

#endif
