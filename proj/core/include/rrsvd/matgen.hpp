#ifndef RRSVD_MATGEN_HPP
#define RRSVD_MATGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rrsvd/dense_matrix.hpp"

namespace rrsvd {

// Prescribed non-increasing singular-value list.
struct SpectrumSpec {
    std::vector<double> values;
    std::string label;
};

// Test matrix with a prescribed spectrum wrapped in random orthonormal factors.
struct StructuredInstance {
    DenseMatrix matrix;
    SpectrumSpec spectrum;
    std::uint64_t u_seed;
    std::uint64_t v_seed;
};

// Validating constructor; throws on a decreasing violation or negative values.
SpectrumSpec make_spectrum(std::vector<double> values, std::string label);

// Q factor of the QR factorization of an m x n Gaussian matrix; requires m >= n.
DenseMatrix random_orthonormal(std::size_t m, std::size_t n, std::uint64_t seed);

// A = U diag(spec) V^H with U (m x n) and V (n x n) random orthonormal.
StructuredInstance structured_matrix(const SpectrumSpec& spec, std::size_t m,
                                     std::uint64_t u_seed, std::uint64_t v_seed);

// sigma_j = ratio^(j-1), normalized so that sum sigma_j^2 = 1; ratio in (0, 1).
SpectrumSpec spectrum_exponential(std::size_t n, double ratio);

// sigma_j = 1/j, unnormalized.
SpectrumSpec spectrum_power(std::size_t n);

// Fraction of squared spectral weight beyond rank k: sum_{i>k} s_i^2 / sum_i s_i^2.
double discarded_weight(const SpectrumSpec& spec, std::size_t k);

// Unnormalized Frobenius tail sqrt(sum_{i>k} s_i^2), the optimal rank-k
// truncation error.
double frobenius_tail(const SpectrumSpec& spec, std::size_t k);

// Bisection on the decay ratio so that discarded_weight(spectrum_exponential(n, r), k)
// hits target_weight.
double calibrate_exponential_ratio(std::size_t n, std::size_t k, double target_weight);

}  // namespace rrsvd

#endif
