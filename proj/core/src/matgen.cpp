#include "rrsvd/matgen.hpp"

#include <cmath>
#include <utility>

#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"
#include "rrsvd/randomized.hpp"

namespace rrsvd {

SpectrumSpec make_spectrum(std::vector<double> values, std::string label) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0 || !std::isfinite(values[i]))
            throw contract_violation("spectrum values must be finite and non-negative");
        if (i > 0 && values[i] > values[i - 1])
            throw contract_violation("spectrum values must be non-increasing");
    }
    return {std::move(values), std::move(label)};
}

DenseMatrix random_orthonormal(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < n) throw contract_violation("random_orthonormal: requires m >= n");
    return qr(gaussian_test_matrix(m, n, seed)).q;
}

StructuredInstance structured_matrix(const SpectrumSpec& spec, std::size_t m,
                                     std::uint64_t u_seed, std::uint64_t v_seed) {
    const std::size_t n = spec.values.size();
    if (m < n) throw contract_violation("structured_matrix: requires m >= spectrum length");
    DenseMatrix u = random_orthonormal(m, n, u_seed);
    const DenseMatrix v = random_orthonormal(n, n, v_seed);
    u.scale_cols(spec.values);
    return {gemm(u, false, v, true), spec, u_seed, v_seed};
}

SpectrumSpec spectrum_exponential(std::size_t n, double ratio) {
    if (n < 1) throw contract_violation("spectrum_exponential: n >= 1 required");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw contract_violation("spectrum_exponential: ratio must be in (0, 1)");
    std::vector<double> s(n);
    double sum_sq = 0.0;
    double v = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = v;
        sum_sq += v * v;
        v *= ratio;
    }
    const double scale = 1.0 / std::sqrt(sum_sq);
    for (double& x : s) x *= scale;
    return {std::move(s), "exp-decay"};
}

SpectrumSpec spectrum_power(std::size_t n) {
    if (n < 1) throw contract_violation("spectrum_power: n >= 1 required");
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = 1.0 / static_cast<double>(j + 1);
    return {std::move(s), "one-over-j"};
}

double discarded_weight(const SpectrumSpec& spec, std::size_t k) {
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        const double sq = spec.values[i] * spec.values[i];
        total += sq;
        if (i >= k) tail += sq;
    }
    if (total <= 0.0) return 0.0;
    return tail / total;
}

double frobenius_tail(const SpectrumSpec& spec, std::size_t k) {
    double tail = 0.0;
    for (std::size_t i = k; i < spec.values.size(); ++i)
        tail += spec.values[i] * spec.values[i];
    return std::sqrt(tail);
}

double calibrate_exponential_ratio(std::size_t n, std::size_t k, double target_weight) {
    if (k >= n) throw contract_violation("calibrate_exponential_ratio: requires k < n");
    if (!(target_weight > 0.0 && target_weight < 1.0))
        throw contract_violation("calibrate_exponential_ratio: target in (0, 1) required");
    double lo = 1e-6, hi = 1.0 - 1e-12;
    // discarded_weight is increasing in the ratio.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (discarded_weight(spectrum_exponential(n, mid), k) < target_weight)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rrsvd
