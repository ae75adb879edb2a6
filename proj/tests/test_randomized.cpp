#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"
#include "rrsvd/matgen.hpp"
#include "rrsvd/randomized.hpp"

using namespace rrsvd;

namespace {

DenseMatrix project_residual(const DenseMatrix& a, const DenseMatrix& q) {
    // (I - Q Q^H) A, the explicit-projection oracle.
    const DenseMatrix qha = gemm(q, true, a, false);
    const DenseMatrix proj = matmul(q, qha);
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= proj.data()[i];
    return out;
}

}  // namespace

TEST_CASE("gaussian_test_matrix determinism and seed separation") {
    const DenseMatrix a = gaussian_test_matrix(40, 7, 123);
    const DenseMatrix b = gaussian_test_matrix(40, 7, 123);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);

    const DenseMatrix c = gaussian_test_matrix(40, 7, 124);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.data()[i] != c.data()[i]) ++differing;
    CHECK(differing >= a.size() * 99 / 100);
}

TEST_CASE("gaussian_test_matrix column means vanish at the LLN rate") {
    const std::size_t n = 10000;
    const DenseMatrix a = gaussian_test_matrix(n, 4, 9001);
    for (std::size_t j = 0; j < 4; ++j) {
        cplx mean(0.0);
        for (std::size_t i = 0; i < n; ++i) mean += a(i, j);
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("range finder captures a rank-1 matrix with q=0") {
    const DenseMatrix x = gaussian_test_matrix(30, 1, 5);
    const DenseMatrix y = gaussian_test_matrix(20, 1, 6);
    const DenseMatrix a = gemm(x, false, y, true);
    const RangeBasis basis = randomized_range_finder(a, 2, 0, 7);
    CHECK(residual_frobenius(a, basis) <= 1e-10 * frobenius_norm(a));
}

TEST_CASE("range finder on the identity with full l") {
    const DenseMatrix a = DenseMatrix::identity(8);
    const RangeBasis basis = randomized_range_finder(a, 8, 0, 8);
    // Explicit projector residual; the norm-difference identity bottoms out
    // at sqrt(eps) and gets its own comparison test below.
    CHECK(frobenius_norm(project_residual(a, basis.q_matrix)) <= 1e-12);
}

TEST_CASE("range finder rejects l above min(m, n)") {
    const DenseMatrix a = gaussian_test_matrix(6, 4, 1);
    CHECK_THROWS_AS(randomized_range_finder(a, 5, 0, 2), contract_violation);
}

TEST_CASE("range finder residual beats the tail bound on a decaying spectrum") {
    // sigma = (1, 1e-3, 1e-6, ...) with the smallest admissible k = p = 2
    // (the bound hypotheses need k >= 2), same sketch width l = 4.
    const std::size_t n = 6, m = 12;
    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::pow(10.0, -3.0 * static_cast<double>(j));
    const SpectrumSpec spec = make_spectrum(sigma, "steep");
    const ErrorBoundReport report = error_bound_report(spec.values, 2, 2, 2);

    std::size_t within = 0;
    for (unsigned trial = 0; trial < 100; ++trial) {
        const StructuredInstance inst = structured_matrix(spec, m, 100 + trial, 900 + trial);
        const RangeBasis basis = randomized_range_finder(inst.matrix, 4, 2, 5000 + trial);
        const double residual = operator_norm_estimate(project_residual(inst.matrix, basis.q_matrix));
        if (residual <= report.tail_bound) ++within;
    }
    CHECK(within >= 95);
}

TEST_CASE("fixed-rank recovers an exactly low-rank diagonal") {
    DenseMatrix a(6, 5);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const SvdResult s = rrsvd_fixed_rank(a, {2, 2, 1, 77});
    REQUIRE(s.sigma.size() == 2);
    CHECK(std::abs(s.sigma[0] - 3.0) < 1e-10);
    CHECK(std::abs(s.sigma[1] - 2.0) < 1e-10);
    CHECK(s.achieved_rank == 2);
}

TEST_CASE("fixed-rank parameter contracts") {
    const DenseMatrix a = gaussian_test_matrix(10, 8, 3);
    CHECK_THROWS_AS(rrsvd_fixed_rank(a, {1, 2, 0, 0}), contract_violation);
    CHECK_THROWS_AS(rrsvd_fixed_rank(a, {2, 1, 0, 0}), contract_violation);
    CHECK_THROWS_AS(rrsvd_fixed_rank(a, {5, 4, 0, 0}), contract_violation);
}

TEST_CASE("fixed-rank matches the deterministic SVD at small scale") {
    // Desk-size analogue of the large-matrix accuracy study.
    const SpectrumSpec spec = spectrum_exponential(100, 0.85);
    const StructuredInstance inst = structured_matrix(spec, 200, 11, 12);
    const std::vector<double> s_det = singular_values(inst.matrix);
    double det_err = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
        det_err = std::max(det_err, std::abs(s_det[i] - spec.values[i]));
    for (unsigned rerun = 0; rerun < 5; ++rerun) {
        const SvdResult s = rrsvd_fixed_rank(inst.matrix, {10, 10, 4, 31 + rerun});
        double err = 0.0;
        for (std::size_t i = 0; i < 10; ++i)
            err = std::max(err, std::abs(s.sigma[i] - spec.values[i]));
        CHECK(err <= 10.0 * det_err + 1e-13);  // eps floor dominates at desk scale
    }
}

TEST_CASE("more power iterations improve a slowly decaying spectrum") {
    const SpectrumSpec spec = spectrum_power(100);
    const StructuredInstance inst = structured_matrix(spec, 150, 21, 22);
    std::vector<double> err_q2(10, 0.0), err_q6(10, 0.0);
    // Median over reruns, per retained index.
    const unsigned reruns = 9;
    std::vector<std::vector<double>> e2(10), e6(10);
    for (unsigned rerun = 0; rerun < reruns; ++rerun) {
        const SvdResult s2 = rrsvd_fixed_rank(inst.matrix, {10, 10, 2, 500 + rerun});
        const SvdResult s6 = rrsvd_fixed_rank(inst.matrix, {10, 10, 6, 500 + rerun});
        for (std::size_t i = 0; i < 10; ++i) {
            e2[i].push_back(std::abs(s2.sigma[i] - spec.values[i]));
            e6[i].push_back(std::abs(s6.sigma[i] - spec.values[i]));
        }
    }
    for (std::size_t i = 0; i < 10; ++i) {
        std::sort(e2[i].begin(), e2[i].end());
        std::sort(e6[i].begin(), e6[i].end());
        CHECK(e6[i][reruns / 2] <= e2[i][reruns / 2] + 1e-15);
    }
}

TEST_CASE("fixed-precision terminates immediately on an exactly low-rank matrix") {
    DenseMatrix d(40, 30);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    d(2, 2) = 0.5;
    const DenseMatrix u = qr(gaussian_test_matrix(40, 40, 71)).q;
    const DenseMatrix v = qr(gaussian_test_matrix(30, 30, 72)).q;
    const DenseMatrix a = matmul(u, gemm(d, false, v, true));

    const SvdResult s = rrsvd_fixed_precision(a, {1e-10, 5, 0}, 8, 0, 73);
    CHECK(s.tolerance_certified);
    CHECK(s.achieved_rank <= 8);
    // Residual beyond the basis.
    DenseMatrix us = s.u;
    us.scale_cols(s.sigma);
    const DenseMatrix rec = gemm(us, false, s.v, true);
    DenseMatrix diff = a;
    for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] -= rec.data()[i];
    CHECK(operator_norm_estimate(diff) <= 1e-10);
}

TEST_CASE("fixed-precision identifies the retention rank for a tolerance") {
    const SpectrumSpec spec = spectrum_power(150);
    const StructuredInstance inst = structured_matrix(spec, 200, 81, 82);
    const double a_norm = frobenius_norm(inst.matrix);
    const double tol = 5e-2;

    // Oracle: smallest k with the spectrum tail below tol.
    std::size_t oracle = 0;
    while (frobenius_tail(spec, oracle) > tol * a_norm) ++oracle;

    const SvdResult s = rrsvd_fixed_precision(inst.matrix, {tol * a_norm, 5, 10}, 20, 2, 83);
    CHECK(s.tolerance_certified);
    const std::size_t certified = retained_rank_for_tolerance(s, a_norm, tol);
    CHECK(certified >= oracle * 95 / 100);
    CHECK(certified <= oracle * 105 / 100 + 2);
}

TEST_CASE("fixed-precision flags exhaustion instead of throwing") {
    // Identity-like spectrum cannot be compressed; an unreachable tolerance
    // must exhaust the growth loop and come back uncertified.
    const DenseMatrix a = DenseMatrix::identity(24);
    const SvdResult s = rrsvd_fixed_precision(a, {1e-30, 3, 0}, 4, 0, 3);
    CHECK_FALSE(s.tolerance_certified);
}

TEST_CASE("probe certificate frequency, small smoke version") {
    const SpectrumSpec spec = spectrum_power(40);
    const StructuredInstance inst = structured_matrix(spec, 60, 41, 42);
    const double true_norm = 1.0;  // sigma_1 of the power spectrum
    std::size_t hits = 0;
    const unsigned trials = 2000;
    for (unsigned t = 0; t < trials; ++t)
        if (true_norm <= probe_operator_bound(inst.matrix, 1, 10000 + t)) ++hits;
    // >= 1 - 10^-1 minus a generous binomial band.
    CHECK(hits >= static_cast<std::size_t>(trials * 0.88));
}

TEST_CASE("error_bound_report closed forms") {
    SUBCASE("exactly rank-k spectrum gives zero bounds") {
        std::vector<double> sigma(20, 0.0);
        sigma[0] = 3.0;
        sigma[1] = 2.0;
        sigma[2] = 1.0;
        const ErrorBoundReport r = error_bound_report(sigma, 3, 4, 1);
        CHECK(r.expected_bound == 0.0);
        CHECK(r.tail_bound == 0.0);
    }
    SUBCASE("frozen fixture for the harmonic spectrum") {
        const SpectrumSpec spec = spectrum_power(750);
        const ErrorBoundReport r = error_bound_report(spec.values, 50, 50, 2);
        CHECK(r.expected_bound == doctest::Approx(0.02498901033946713).epsilon(1e-10));
        CHECK(r.tail_bound == doctest::Approx(0.3437025295848812).epsilon(1e-10));
        CHECK(r.failure_probability == doctest::Approx(3.3776997205e-85).epsilon(1e-9));
    }
    SUBCASE("expected bound is non-increasing in q when sigma_{k+1} <= 1") {
        const SpectrumSpec spec = spectrum_power(60);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q <= 6; ++q) {
            const ErrorBoundReport r = error_bound_report(spec.values, 5, 5, q);
            CHECK(r.expected_bound <= prev + 1e-15);
            prev = r.expected_bound;
        }
    }
}

TEST_CASE("frobenius_cap") {
    CHECK(frobenius_cap(0.0) == 0.0);
    CHECK(frobenius_cap(1.0) == doctest::Approx(1.2825498301618640).epsilon(1e-14));
    // Harmonic spectra satisfy the cap with margin.
    const SpectrumSpec spec = spectrum_power(750);
    double sum_sq = 0.0;
    for (double s : spec.values) sum_sq += s * s;
    CHECK(std::sqrt(sum_sq) < frobenius_cap(1.0));

    const StructuredInstance inst = structured_matrix(spectrum_power(120), 160, 51, 52);
    CHECK(frobenius_norm(inst.matrix) <= frobenius_cap(1.0));
}

TEST_CASE("residual_frobenius identities") {
    const SpectrumSpec spec = spectrum_exponential(30, 0.5);
    const StructuredInstance inst = structured_matrix(spec, 50, 61, 62);
    const double a_norm = frobenius_norm(inst.matrix);

    SUBCASE("full basis gives zero") {
        const RangeBasis full = randomized_range_finder(inst.matrix, 30, 1, 63);
        CHECK(residual_frobenius(inst.matrix, full) <= 1e-10 * a_norm);
    }
    SUBCASE("single orthogonal column gives the full norm") {
        // Columns of U beyond the rank span the orthogonal complement.
        DenseMatrix rank1(50, 3);
        const DenseMatrix u = qr(gaussian_test_matrix(50, 4, 64)).q;
        for (std::size_t i = 0; i < 50; ++i)
            for (std::size_t j = 0; j < 3; ++j) rank1(i, j) = u(i, j);
        const DenseMatrix orth(50, 1, [&] {
            std::vector<cplx> col(50);
            for (std::size_t i = 0; i < 50; ++i) col[i] = u(i, 3);
            return col;
        }());
        const double r = residual_frobenius(rank1, {orth, 1});
        CHECK(r == doctest::Approx(frobenius_norm(rank1)).epsilon(1e-10));
    }
    SUBCASE("agrees with the explicit projection oracle") {
        const RangeBasis basis = randomized_range_finder(inst.matrix, 6, 1, 65);
        const double direct = frobenius_norm(project_residual(inst.matrix, basis.q_matrix));
        CHECK(std::abs(residual_frobenius(inst.matrix, basis) - direct) <= 1e-8 * a_norm);
    }
}

TEST_CASE("power-spectrum law for explicit powered matrices") {
    for (unsigned seed = 0; seed < 3; ++seed) {
        // Spectrum bounded away from zero: sigma^(2q+1) of the smallest value
        // must stay well above the absolute SVD accuracy eps * sigma_1^(2q+1).
        std::vector<double> values(12);
        for (std::size_t j = 0; j < 12; ++j)
            values[j] = 1.0 - 0.5 * static_cast<double>(j) / 11.0;
        const SpectrumSpec spec = make_spectrum(values, "flat");
        const StructuredInstance inst = structured_matrix(spec, 16, seed, 100 + seed);
        const std::vector<double> base = singular_values(inst.matrix);
        DenseMatrix b = inst.matrix;
        for (std::size_t q = 1; q <= 3; ++q) {
            // B_{q} = (A A^H) B_{q-1}
            b = matmul(inst.matrix, gemm(inst.matrix, true, b, false));
            const std::vector<double> powered = singular_values(b);
            const double exponent = 2.0 * static_cast<double>(q) + 1.0;
            for (std::size_t j = 0; j < base.size(); ++j) {
                const double expected = std::pow(base[j], exponent);
                CHECK(std::abs(powered[j] - expected) <= 1e-8 * expected);
            }
        }
    }
}

TEST_CASE("appending basis columns never increases the residual") {
    const SpectrumSpec spec = spectrum_power(40);
    const StructuredInstance inst = structured_matrix(spec, 60, 71, 72);
    const DenseMatrix sketch = matmul(inst.matrix, gaussian_test_matrix(40, 20, 73));
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t l = 2; l <= 20; l += 3) {
        const RangeBasis basis{qr(sketch.left_cols(l)).q, l};
        const double r = residual_frobenius(inst.matrix, basis);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
}

TEST_CASE("full-width sketch with power iteration reproduces svd_full") {
    const SpectrumSpec spec = spectrum_exponential(24, 0.6);
    const StructuredInstance inst = structured_matrix(spec, 40, 91, 92);
    const SvdResult det = svd_full(inst.matrix);
    const SvdResult rand = rrsvd_fixed_rank(inst.matrix, {12, 12, 1, 93});
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(std::abs(rand.sigma[i] - det.sigma[i]) <= 1e-9 * det.sigma[0]);
}

TEST_CASE("identical seeds give bit-identical factorizations") {
    const SpectrumSpec spec = spectrum_exponential(20, 0.8);
    const StructuredInstance inst = structured_matrix(spec, 30, 7, 8);
    const SvdResult a = rrsvd_fixed_rank(inst.matrix, {5, 5, 2, 4242});
    const SvdResult b = rrsvd_fixed_rank(inst.matrix, {5, 5, 2, 4242});
    for (std::size_t i = 0; i < a.sigma.size(); ++i) CHECK(a.sigma[i] == b.sigma[i]);
    for (std::size_t i = 0; i < a.u.size(); ++i) CHECK(a.u.data()[i] == b.u.data()[i]);
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(a.v.data()[i] == b.v.data()[i]);
}

TEST_CASE("retained_rank_for_tolerance") {
    SvdResult s;
    s.sigma = {2.0, 1.0, 0.5, 0.25};
    const double a_norm = std::sqrt(4.0 + 1.0 + 0.25 + 0.0625);
    CHECK(retained_rank_for_tolerance(s, a_norm, 1.0) == 0);
    CHECK(retained_rank_for_tolerance(s, a_norm, 0.5) == 1);
    CHECK(retained_rank_for_tolerance(s, a_norm, 1e-12) == 4);
}
