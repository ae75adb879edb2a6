#ifndef RRSVD_RANDOMIZED_HPP
#define RRSVD_RANDOMIZED_HPP

#include <cstdint>
#include <vector>

#include "rrsvd/dense_matrix.hpp"
#include "rrsvd/linalg.hpp"

// Randomized reduced-rank SVD: Gaussian range sketching with power iterations,
// a probabilistic accuracy check for the fixed-precision problem, and the
// a-priori error bounds. Bounds follow Halko, Martinsson & Tropp,
// SIAM Review 53 (2011).

namespace rrsvd {

struct RrsvdParams {
    std::size_t target_rank;       // k >= 2
    std::size_t oversampling;      // p >= 2
    std::size_t power_iterations;  // q >= 0
    std::uint64_t seed;
};

// Orthonormal basis approximating the range of a matrix.
struct RangeBasis {
    DenseMatrix q_matrix;  // m x l, orthonormal columns
    std::size_t l;
};

struct AccuracyCheckParams {
    double tolerance;          // epsilon, on the probe (max column norm) scale
    std::size_t probe_count;   // r >= 1
    // Columns appended per failed round; 0 doubles the current basis size.
    std::size_t growth_block = 0;
};

// A-priori bounds evaluated on a prescribed spectrum.
struct ErrorBoundReport {
    double expected_bound;       // expected operator-norm residual after power iteration
    double tail_bound;           // high-probability operator-norm bound
    double failure_probability;  // 3 / p^p
    double frobenius_cap;        // sigma_1 * pi/sqrt(6), valid when sigma_j <= sigma_1/j
};

// n x l matrix with i.i.d. entries whose real and imaginary parts are each
// standard normal. One mt19937_64 stream per call, seeded with `seed`, filled
// row-major; identical seeds give identical matrices.
DenseMatrix gaussian_test_matrix(std::size_t n, std::size_t l, std::uint64_t seed);

// Range finder with q power-iteration rounds, re-orthogonalizing after every
// product:  Y0 = A*Omega, QR;  then for j = 1..q:  A^H Q -> QR,  A Q~ -> QR.
RangeBasis randomized_range_finder(const DenseMatrix& a, std::size_t l, std::size_t q,
                                   std::uint64_t seed);

// Untruncated l-column factorization Q (Q^H A) from a power-iterated sketch;
// the fixed-rank solver truncates this to its target rank.
SvdResult rrsvd_sketched_svd(const DenseMatrix& a, std::size_t l, std::size_t q,
                             std::uint64_t seed);

// Rank-k truncation of the (k+p)-column factorization Q (Q^H A).
SvdResult rrsvd_fixed_rank(const DenseMatrix& a, const RrsvdParams& params);

// Fixed-precision solver: grows the basis until r Gaussian probes of the
// residual all have column norm <= tolerance, then assembles the SVD. When the
// basis reaches its size limit without passing, the best-effort result is
// returned with tolerance_certified = false.
SvdResult rrsvd_fixed_precision(const DenseMatrix& a, const AccuracyCheckParams& check,
                                std::size_t initial_l, std::size_t q, std::uint64_t seed);

// Bounds for a rank-k sketch with oversampling p and q power iterations on a
// matrix with the given singular values.
ErrorBoundReport error_bound_report(const std::vector<double>& sigma, std::size_t k,
                                    std::size_t p, std::size_t q);

// Frobenius-norm cap sigma_1 * pi/sqrt(6) for spectra with sigma_j <= sigma_1/j.
double frobenius_cap(double sigma1);

// || (I - Q Q^H) A ||_F via sqrt(||A||_F^2 - ||Q^H A||_F^2), clamped at zero.
double residual_frobenius(const DenseMatrix& a, const RangeBasis& basis);

// Probe estimate 10 sqrt(2/pi) max_i ||M w_i|| over r standard Gaussian vectors;
// an upper bound for ||M|| with probability >= 1 - 10^-r.
double probe_operator_bound(const DenseMatrix& m, std::size_t r, std::uint64_t seed);

// Smallest retained rank k such that the Frobenius residual implied by the
// factorization, sqrt(||A||_F^2 - sum_{i<=k} sigma_i^2), is at most
// rel_tolerance * ||A||_F.  Returns sigma.size() when unreachable.
std::size_t retained_rank_for_tolerance(const SvdResult& result, double a_frobenius_norm,
                                        double rel_tolerance);

}  // namespace rrsvd

#endif
