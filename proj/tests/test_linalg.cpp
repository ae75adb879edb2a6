#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "rrsvd/dense_matrix.hpp"
#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"

using namespace rrsvd;

namespace {

DenseMatrix random_matrix(std::size_t m, std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(dist(gen), dist(gen));
    return a;
}

// Independent oracle: plain triple loop.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s(0.0);
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

// Independent oracle: classical Gram-Schmidt.
DenseMatrix gram_schmidt_q(const DenseMatrix& a) {
    DenseMatrix q = a;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t prev = 0; prev < j; ++prev) {
            cplx proj(0.0);
            for (std::size_t i = 0; i < a.rows(); ++i)
                proj += std::conj(q(i, prev)) * q(i, j);
            for (std::size_t i = 0; i < a.rows(); ++i) q(i, j) -= proj * q(i, prev);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < a.rows(); ++i) q(i, j) /= nrm;
    }
    return q;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double orthonormality_residual(const DenseMatrix& q) {
    const DenseMatrix g = gemm(q, true, q, false);
    double m = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            m = std::max(m, std::abs(g(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
    return m;
}

}  // namespace

TEST_CASE("matmul identity and scalar") {
    DenseMatrix a = random_matrix(3, 4, 1);
    CHECK(max_abs_diff(matmul(DenseMatrix::identity(3), a), a) == doctest::Approx(0.0));

    DenseMatrix x(1, 1), y(1, 1);
    x(0, 0) = 2.0;
    y(0, 0) = cplx(3.0, 1.0);
    const DenseMatrix z = matmul(x, y);
    CHECK(std::abs(z(0, 0) - cplx(6.0, 2.0)) < 1e-15);
}

TEST_CASE("matmul against naive oracle") {
    const DenseMatrix a = random_matrix(5, 4, 2);
    const DenseMatrix b = random_matrix(4, 3, 3);
    CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-13);
}

TEST_CASE("matmul dimension mismatch throws") {
    const DenseMatrix a = random_matrix(3, 4, 4);
    const DenseMatrix b = random_matrix(3, 3, 5);
    CHECK_THROWS_AS(matmul(a, b), contract_violation);
}

TEST_CASE("adjoint basics") {
    DenseMatrix sym(2, 2);
    sym(0, 0) = 1.0;
    sym(0, 1) = 2.0;
    sym(1, 0) = 2.0;
    sym(1, 1) = -3.0;
    CHECK(max_abs_diff(adjoint(sym), sym) == 0.0);

    DenseMatrix ii(1, 1);
    ii(0, 0) = cplx(0.0, 1.0);
    CHECK(adjoint(ii)(0, 0) == cplx(0.0, -1.0));

    const DenseMatrix a = random_matrix(4, 6, 6);
    CHECK(max_abs_diff(adjoint(adjoint(a)), a) == 0.0);
}

TEST_CASE("qr reconstructs and is orthonormal") {
    const DenseMatrix a = random_matrix(8, 5, 7);
    const QrFactors f = qr(a);
    CHECK(f.q.cols() == 5);
    CHECK(orthonormality_residual(f.q) < 1e-12);
    const double rel = max_abs_diff(matmul(f.q, f.r), a) / frobenius_norm(a);
    CHECK(rel < 1e-12);
}

TEST_CASE("qr of orthonormal input: R diagonal with unit-modulus entries") {
    const QrFactors base = qr(random_matrix(6, 3, 8));
    const QrFactors f = qr(base.q);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(std::abs(std::abs(f.r(i, j)) - 1.0) < 1e-12);
            else
                CHECK(std::abs(f.r(i, j)) < 1e-12);
        }
}

TEST_CASE("qr against classical Gram-Schmidt on a real 4x2 input") {
    DenseMatrix a(4, 2);
    a(0, 0) = 1.0; a(0, 1) = 1.0;
    a(1, 0) = 1.0; a(1, 1) = 0.0;
    a(2, 0) = 0.0; a(2, 1) = 1.0;
    a(3, 0) = 0.0; a(3, 1) = 2.0;
    const DenseMatrix q_ref = gram_schmidt_q(a);
    const QrFactors f = qr(a);
    // Householder Q may differ by a column phase; align on the first entry.
    for (std::size_t j = 0; j < 2; ++j) {
        const cplx phase = q_ref(0, j) / f.q(0, j);
        CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(f.q(i, j) * phase - q_ref(i, j)) < 1e-12);
    }
}

TEST_CASE("qr handles a zero column without NaN") {
    DenseMatrix a = random_matrix(5, 3, 9);
    for (std::size_t i = 0; i < 5; ++i) a(i, 1) = 0.0;
    const QrFactors f = qr(a);
    CHECK(f.q.all_finite());
    CHECK(orthonormality_residual(f.q) < 1e-12);
    CHECK(std::abs(f.r(1, 1)) < 1e-12);
}

TEST_CASE("svd_full of a diagonal matrix") {
    DenseMatrix a(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const SvdResult s = svd_full(a);
    REQUIRE(s.sigma.size() == 3);
    CHECK(s.sigma[0] == doctest::Approx(3.0));
    CHECK(s.sigma[1] == doctest::Approx(2.0));
    CHECK(s.sigma[2] == doctest::Approx(1.0));
    CHECK(s.achieved_rank == 3);
    CHECK(s.discarded_weight == 0.0);
}

TEST_CASE("svd_full of a 1x1 imaginary matrix") {
    DenseMatrix a(1, 1);
    a(0, 0) = cplx(0.0, 5.0);
    const SvdResult s = svd_full(a);
    CHECK(s.sigma[0] == doctest::Approx(5.0));
    CHECK(std::abs(s.u(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.v(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("svd_full reconstruction and orthonormality") {
    const DenseMatrix a = random_matrix(7, 5, 10);
    const SvdResult s = svd_full(a);
    CHECK(orthonormality_residual(s.u) < 1e-10);
    CHECK(orthonormality_residual(s.v) < 1e-10);
    DenseMatrix us = s.u;
    us.scale_cols(s.sigma);
    const DenseMatrix rec = gemm(us, false, s.v, true);
    CHECK(max_abs_diff(rec, a) / frobenius_norm(a) < 1e-10);
    for (std::size_t i = 1; i < s.sigma.size(); ++i) CHECK(s.sigma[i] <= s.sigma[i - 1]);
}

TEST_CASE("svd_full invariant under random unitaries") {
    const DenseMatrix a = random_matrix(6, 4, 11);
    const SvdResult sa = svd_full(a);
    const DenseMatrix qu = qr(random_matrix(6, 6, 12)).q;
    const DenseMatrix qv = qr(random_matrix(4, 4, 13)).q;
    const SvdResult sb = svd_full(matmul(qu, gemm(a, false, qv, true)));
    for (std::size_t i = 0; i < sa.sigma.size(); ++i)
        CHECK(std::abs(sa.sigma[i] - sb.sigma[i]) < 1e-9 * sa.sigma[0]);
}

TEST_CASE("operator_norm_estimate") {
    CHECK(operator_norm_estimate(DenseMatrix::identity(7)) == doctest::Approx(1.0));

    DenseMatrix d(5, 5);
    for (std::size_t i = 0; i < 5; ++i) d(i, i) = 1.0 / static_cast<double>(i + 1);
    CHECK(operator_norm_estimate(d) == doctest::Approx(1.0));

    const DenseMatrix a = random_matrix(20, 12, 14);
    const double ref = svd_full(a).sigma[0];
    CHECK(std::abs(operator_norm_estimate(a) - ref) < 1e-8 * ref);
}

TEST_CASE("frobenius_norm") {
    CHECK(frobenius_norm(DenseMatrix::identity(4)) == doctest::Approx(2.0));

    DenseMatrix row(1, 2);
    row(0, 0) = 3.0;
    row(0, 1) = 4.0;
    CHECK(frobenius_norm(row) == doctest::Approx(5.0));

    const DenseMatrix a = random_matrix(9, 6, 15);
    const SvdResult s = svd_full(a);
    double sum_sq = 0.0;
    for (double v : s.sigma) sum_sq += v * v;
    CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(sum_sq)).epsilon(1e-10));
}

TEST_CASE("norm sandwich across random shapes") {
    for (unsigned seed = 20; seed < 40; ++seed) {
        const std::size_t m = 3 + seed % 7, n = 2 + seed % 5;
        const DenseMatrix a = random_matrix(m, n, seed);
        const double op = svd_full(a).sigma[0];
        const double fro = frobenius_norm(a);
        CHECK(op <= fro * (1.0 + 1e-12));
        CHECK(fro <= std::sqrt(static_cast<double>(std::min(m, n))) * op * (1.0 + 1e-12));
    }
}

TEST_CASE("hermitian_eig reconstructs") {
    DenseMatrix a = random_matrix(5, 5, 30);
    // Symmetrize.
    const DenseMatrix ah = adjoint(a);
    for (std::size_t i = 0; i < a.size(); ++i)
        a.data()[i] = 0.5 * (a.data()[i] + ah.data()[i]);
    const HermitianEig e = hermitian_eig(a);
    DenseMatrix scaled = e.vectors;
    scaled.scale_cols(e.values);
    CHECK(max_abs_diff(gemm(scaled, false, e.vectors, true), a) < 1e-12);
}
