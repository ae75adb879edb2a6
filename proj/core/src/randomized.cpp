#include "rrsvd/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rrsvd/errors.hpp"

namespace rrsvd {

namespace {

// Box-Muller on explicit 53-bit uniforms so the stream is identical across
// standard library implementations.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1p-53;          // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    cplx next_complex() {
        const double re = next();
        const double im = next();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::vector<double> column_norms(const DenseMatrix& a) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += std::norm(a(i, j));
    for (double& v : out) v = std::sqrt(v);
    return out;
}

// Assemble the SVD of A restricted to the range basis Q: B = Q^H A,
// B = U~ S V^H, U = Q U~.
SvdResult assemble_from_basis(const DenseMatrix& a, const DenseMatrix& q) {
    const DenseMatrix b = gemm(q, true, a, false);
    SvdResult small = svd_full(b);
    SvdResult out;
    out.u = matmul(q, small.u);
    out.sigma = std::move(small.sigma);
    out.v = std::move(small.v);
    out.achieved_rank = out.sigma.size();
    return out;
}

double discarded_weight_of(const std::vector<double>& sigma, std::size_t kept,
                           double a_frobenius) {
    const double total = a_frobenius * a_frobenius;
    if (total <= 0.0) return 0.0;
    double kept_sq = 0.0;
    for (std::size_t i = 0; i < kept && i < sigma.size(); ++i) kept_sq += sigma[i] * sigma[i];
    return std::clamp(1.0 - kept_sq / total, 0.0, 1.0);
}

}  // namespace

DenseMatrix gaussian_test_matrix(std::size_t n, std::size_t l, std::uint64_t seed) {
    if (l < 1 || n < l) throw contract_violation("gaussian_test_matrix: requires n >= l >= 1");
    GaussianStream g(seed);
    DenseMatrix out(n, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j) out(i, j) = g.next_complex();
    return out;
}

RangeBasis randomized_range_finder(const DenseMatrix& a, std::size_t l, std::size_t q,
                                   std::uint64_t seed) {
    if (l > std::min(a.rows(), a.cols()))
        throw contract_violation("randomized_range_finder: l > min(m, n)");
    const DenseMatrix omega = gaussian_test_matrix(a.cols(), l, seed);
    DenseMatrix basis = qr(matmul(a, omega)).q;
    for (std::size_t j = 0; j < q; ++j) {
        const DenseMatrix qt = qr(gemm(a, true, basis, false)).q;
        basis = qr(matmul(a, qt)).q;
    }
    return {std::move(basis), l};
}

SvdResult rrsvd_sketched_svd(const DenseMatrix& a, std::size_t l, std::size_t q,
                             std::uint64_t seed) {
    const RangeBasis basis = randomized_range_finder(a, l, q, seed);
    SvdResult out = assemble_from_basis(a, basis.q_matrix);
    out.discarded_weight = discarded_weight_of(out.sigma, out.sigma.size(), frobenius_norm(a));
    return out;
}

SvdResult rrsvd_fixed_rank(const DenseMatrix& a, const RrsvdParams& params) {
    const std::size_t k = params.target_rank, p = params.oversampling;
    if (k < 2 || p < 2) throw contract_violation("rrsvd_fixed_rank: requires k >= 2 and p >= 2");
    if (k + p > std::min(a.rows(), a.cols()))
        throw contract_violation("rrsvd_fixed_rank: k + p exceeds min(m, n)");
    const SvdResult full = rrsvd_sketched_svd(a, k + p, params.power_iterations, params.seed);
    SvdResult out;
    out.u = full.u.left_cols(k);
    out.sigma.assign(full.sigma.begin(), full.sigma.begin() + static_cast<std::ptrdiff_t>(k));
    out.v = full.v.left_cols(k);
    out.achieved_rank = k;
    out.discarded_weight = discarded_weight_of(out.sigma, k, frobenius_norm(a));
    return out;
}

SvdResult rrsvd_fixed_precision(const DenseMatrix& a, const AccuracyCheckParams& check,
                                std::size_t initial_l, std::size_t q, std::uint64_t seed) {
    const std::size_t n = a.cols();
    const std::size_t minor = std::min(a.rows(), a.cols());
    const std::size_t r = check.probe_count;
    if (r < 1) throw contract_violation("rrsvd_fixed_precision: probe_count >= 1 required");
    if (initial_l < 1 || initial_l + r > n)
        throw contract_violation("rrsvd_fixed_precision: requires initial_l + probe_count <= n");

    DenseMatrix basis = randomized_range_finder(a, initial_l, q, seed).q_matrix;
    std::size_t l = initial_l;
    // Probe draws continue the sketch stream.
    std::uint64_t draw = 1;
    bool certified = false;
    while (true) {
        const DenseMatrix omega = gaussian_test_matrix(n, r, seed + 0x9e3779b97f4a7c15ull * draw);
        ++draw;
        const DenseMatrix b = matmul(a, omega);
        // D = (I - Q Q^H) B
        DenseMatrix d = b;
        {
            const DenseMatrix qhb = gemm(basis, true, b, false);
            const DenseMatrix proj = matmul(basis, qhb);
            for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] -= proj.data()[i];
        }
        const std::vector<double> norms = column_norms(d);
        const double max_norm = *std::max_element(norms.begin(), norms.end());
        if (max_norm <= check.tolerance) {
            certified = true;
            break;
        }
        if (l + r > minor) break;
        std::size_t grow = check.growth_block == 0 ? l : check.growth_block;
        grow = std::min(grow, minor - l);
        if (grow == 0) break;
        // Reuse the probe images as the first appended columns, then top up
        // with fresh sketch columns.
        DenseMatrix block = b.left_cols(std::min(r, grow));
        if (grow > block.cols()) {
            const DenseMatrix extra = gaussian_test_matrix(
                n, grow - block.cols(), seed + 0x9e3779b97f4a7c15ull * draw);
            ++draw;
            block = block.hcat(matmul(a, extra));
        }
        basis = qr(basis.hcat(block)).q;
        l += grow;
    }

    SvdResult out = assemble_from_basis(a, basis);
    out.discarded_weight = discarded_weight_of(out.sigma, out.sigma.size(), frobenius_norm(a));
    out.tolerance_certified = certified;
    return out;
}

ErrorBoundReport error_bound_report(const std::vector<double>& sigma, std::size_t k,
                                    std::size_t p, std::size_t q) {
    if (k < 2 || p < 2) throw contract_violation("error_bound_report: requires k >= 2, p >= 2");
    if (k + p > sigma.size())
        throw contract_violation("error_bound_report: k + p exceeds spectrum length");
    const double power = 2.0 * static_cast<double>(q) + 1.0;
    const double sigma_k1 = sigma[k];
    double tail_pow_sq = 0.0;  // sum_{j>k} sigma_j^(2(2q+1))
    double tail_sq = 0.0;      // sum_{j>k} sigma_j^2
    for (std::size_t j = k; j < sigma.size(); ++j) {
        tail_pow_sq += std::pow(sigma[j], 2.0 * power);
        tail_sq += sigma[j] * sigma[j];
    }
    const double kd = static_cast<double>(k), pd = static_cast<double>(p);
    const double expected_inner = (1.0 + std::sqrt(kd / (pd - 1.0))) * std::pow(sigma_k1, power) +
                                  (std::numbers::e * std::sqrt(kd + pd) / pd) *
                                      std::sqrt(tail_pow_sq);
    const double alpha = 1.0 + 6.0 * std::sqrt((kd + pd) * pd * std::log(pd));
    const double beta = 3.0 * std::sqrt(kd + pd);
    ErrorBoundReport report;
    report.expected_bound = std::pow(expected_inner, 1.0 / power);
    report.tail_bound = std::pow(alpha, 1.0 / power) * sigma_k1 +
                        std::pow(beta, 1.0 / power) * std::sqrt(tail_sq);
    report.failure_probability = std::max(std::exp(std::log(3.0) - pd * std::log(pd)),
                                          std::numeric_limits<double>::denorm_min());
    report.frobenius_cap = frobenius_cap(sigma.empty() ? 0.0 : sigma[0]);
    return report;
}

double frobenius_cap(double sigma1) {
    if (sigma1 < 0.0) throw contract_violation("frobenius_cap: sigma1 must be >= 0");
    return sigma1 * std::numbers::pi / std::sqrt(6.0);
}

double residual_frobenius(const DenseMatrix& a, const RangeBasis& basis) {
    if (basis.q_matrix.rows() != a.rows())
        throw contract_violation("residual_frobenius: shape mismatch");
    const double a_sq = frobenius_norm(a);
    const double proj = frobenius_norm(gemm(basis.q_matrix, true, a, false));
    return std::sqrt(std::max(0.0, a_sq * a_sq - proj * proj));
}

double probe_operator_bound(const DenseMatrix& m, std::size_t r, std::uint64_t seed) {
    if (r < 1) throw contract_violation("probe_operator_bound: r >= 1 required");
    const DenseMatrix omega = gaussian_test_matrix(m.cols(), r, seed);
    const std::vector<double> norms = column_norms(matmul(m, omega));
    return 10.0 * std::sqrt(2.0 / std::numbers::pi) *
           *std::max_element(norms.begin(), norms.end());
}

std::size_t retained_rank_for_tolerance(const SvdResult& result, double a_frobenius_norm,
                                        double rel_tolerance) {
    const double budget_sq = rel_tolerance * rel_tolerance * a_frobenius_norm * a_frobenius_norm;
    double residual_sq = a_frobenius_norm * a_frobenius_norm;
    if (residual_sq <= budget_sq) return 0;
    for (std::size_t k = 0; k < result.sigma.size(); ++k) {
        residual_sq -= result.sigma[k] * result.sigma[k];
        if (residual_sq <= budget_sq) return k + 1;
    }
    return result.sigma.size();
}

}  // namespace rrsvd
