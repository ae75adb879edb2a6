#include "rrsvd/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "rrsvd/errors.hpp"

namespace rrsvd {

namespace {

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

DenseMatrix gemm(const DenseMatrix& a, bool adj_a, const DenseMatrix& b, bool adj_b) {
    const std::size_t m = adj_a ? a.cols() : a.rows();
    const std::size_t k = adj_a ? a.rows() : a.cols();
    const std::size_t kb = adj_b ? b.cols() : b.rows();
    const std::size_t n = adj_b ? b.rows() : b.cols();
    if (k != kb) throw contract_violation("gemm: inner dimension mismatch");
    DenseMatrix c(m, n);
    if (m == 0 || n == 0) return c;
    if (k == 0) return c;
    const cplx one(1.0, 0.0), zero(0.0, 0.0);
    cblas_zgemm(CblasRowMajor, adj_a ? CblasConjTrans : CblasNoTrans,
                adj_b ? CblasConjTrans : CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), &one, a.data(), static_cast<int>(a.cols()), b.data(),
                static_cast<int>(b.cols()), &zero, c.data(), static_cast<int>(c.cols()));
    return c;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw contract_violation("matmul: dimension mismatch");
    return gemm(a, false, b, false);
}

DenseMatrix adjoint(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

QrFactors qr(const DenseMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw contract_violation("qr: requires rows >= cols");
    DenseMatrix work = a;
    std::vector<cplx> tau(n);
    int info = LAPACKE_zgeqrf(LAPACK_ROW_MAJOR, static_cast<int>(m), static_cast<int>(n),
                              lp(work.data()), static_cast<int>(n), lp(tau.data()));
    if (info != 0) throw numeric_failure("zgeqrf failed", m, n);
    DenseMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);
    info = LAPACKE_zungqr(LAPACK_ROW_MAJOR, static_cast<int>(m), static_cast<int>(n),
                          static_cast<int>(n), lp(work.data()), static_cast<int>(n),
                          lp(tau.data()));
    if (info != 0) throw numeric_failure("zungqr failed", m, n);
    return {std::move(work), std::move(r)};
}

SvdResult svd_full(const DenseMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t k = std::min(m, n);
    DenseMatrix work = a;
    SvdResult out;
    out.sigma.assign(k, 0.0);
    out.u = DenseMatrix(m, k);
    DenseMatrix vt(k, n);
    if (k == 0) {
        out.v = DenseMatrix(n, 0);
        return out;
    }
    int info = LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'S', static_cast<int>(m), static_cast<int>(n),
                              lp(work.data()), static_cast<int>(n), out.sigma.data(),
                              lp(out.u.data()), static_cast<int>(k), lp(vt.data()),
                              static_cast<int>(n));
    if (info != 0) throw numeric_failure("zgesdd did not converge", m, n);
    out.v = adjoint(vt);
    out.discarded_weight = 0.0;
    out.achieved_rank = k;
    return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t k = std::min(m, n);
    std::vector<double> s(k, 0.0);
    if (k == 0) return s;
    DenseMatrix work = a;
    // jobz='N' ignores u/vt but the row-major wrapper still validates their
    // leading dimensions.
    std::vector<cplx> u(1), vt(n);
    int info = LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'N', static_cast<int>(m), static_cast<int>(n),
                              lp(work.data()), static_cast<int>(n), s.data(), lp(u.data()),
                              static_cast<int>(k), lp(vt.data()), static_cast<int>(n));
    if (info != 0) throw numeric_failure("zgesdd did not converge", m, n);
    return s;
}

double operator_norm_estimate(const DenseMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0 || n == 0) return 0.0;
    // Power iteration on A^H A. Deterministic start vector.
    std::vector<cplx> v(n), av(m), atav(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = cplx(std::cos(0.7 * static_cast<double>(j) + 0.3),
                    std::sin(1.3 * static_cast<double>(j) + 0.1));
    double nv = cblas_dznrm2(static_cast<int>(n), v.data(), 1);
    cblas_zdscal(static_cast<int>(n), 1.0 / nv, v.data(), 1);
    const cplx one(1.0, 0.0), zero(0.0, 0.0);
    double prev = 0.0;
    for (int it = 0; it < 500; ++it) {
        cblas_zgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(m), static_cast<int>(n), &one,
                    a.data(), static_cast<int>(n), v.data(), 1, &zero, av.data(), 1);
        cblas_zgemv(CblasRowMajor, CblasConjTrans, static_cast<int>(m), static_cast<int>(n), &one,
                    a.data(), static_cast<int>(n), av.data(), 1, &zero, atav.data(), 1);
        double lambda = cblas_dznrm2(static_cast<int>(n), atav.data(), 1);
        if (lambda == 0.0) return 0.0;
        cblas_zcopy(static_cast<int>(n), atav.data(), 1, v.data(), 1);
        cblas_zdscal(static_cast<int>(n), 1.0 / lambda, v.data(), 1);
        double est = std::sqrt(lambda);
        if (it > 3 && std::abs(est - prev) <= 1e-13 * est) return est;
        prev = est;
    }
    // Slow convergence (clustered leading singular values): fall back to LAPACK.
    if (std::min(m, n) <= 4096) return singular_values(a).front();
    return prev;
}

double frobenius_norm(const DenseMatrix& a) {
    if (a.size() == 0) return 0.0;
    return cblas_dznrm2(static_cast<int>(a.size()), a.data(), 1);
}

HermitianEig hermitian_eig(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw contract_violation("hermitian_eig: matrix not square");
    const std::size_t n = a.rows();
    HermitianEig out{a, std::vector<double>(n, 0.0)};
    if (n == 0) return out;
    int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<int>(n),
                              lp(out.vectors.data()), static_cast<int>(n), out.values.data());
    if (info != 0) throw numeric_failure("zheevd failed", n, n);
    return out;
}

}  // namespace rrsvd
