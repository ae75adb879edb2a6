#ifndef RRSVD_LINALG_HPP
#define RRSVD_LINALG_HPP

#include <vector>

#include "rrsvd/dense_matrix.hpp"

namespace rrsvd {

// Thin QR factorization: q has orthonormal columns (m x n), r is n x n upper triangular.
struct QrFactors {
    DenseMatrix q;
    DenseMatrix r;
};

// Truncated or full factorization A ~ U diag(sigma) V^H.
struct SvdResult {
    DenseMatrix u;              // m x k, orthonormal columns
    std::vector<double> sigma;  // non-increasing, >= 0
    DenseMatrix v;              // n x k, orthonormal columns
    double discarded_weight = 0.0;
    std::size_t achieved_rank = 0;
    // Only meaningful for the fixed-precision solver: false when the accuracy
    // check exhausted the allowed basis size without passing.
    bool tolerance_certified = true;
};

// C = op(a) * op(b) with op in {identity, conjugate transpose}.
DenseMatrix gemm(const DenseMatrix& a, bool adj_a, const DenseMatrix& b, bool adj_b);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix adjoint(const DenseMatrix& a);

// Householder thin QR; requires a.rows >= a.cols. Rank-deficient input is fine:
// Q is still orthonormal, R just carries (near-)zero diagonal entries.
QrFactors qr(const DenseMatrix& a);

// Full SVD (divide and conquer). achieved_rank == min(m, n), discarded_weight == 0.
SvdResult svd_full(const DenseMatrix& a);

// Singular values only; cheaper than svd_full when vectors are not needed.
std::vector<double> singular_values(const DenseMatrix& a);

// Largest singular value, via power iteration on A^H A with an SVD fallback.
double operator_norm_estimate(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);

// Eigendecomposition of a Hermitian matrix: returns eigenvectors in the columns
// of `vectors` and ascending eigenvalues in `values`.
struct HermitianEig {
    DenseMatrix vectors;
    std::vector<double> values;
};
HermitianEig hermitian_eig(const DenseMatrix& a);

}  // namespace rrsvd

#endif
