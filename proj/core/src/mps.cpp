#include "rrsvd/mps.hpp"

#include <cmath>

#include "rrsvd/errors.hpp"

namespace rrsvd::tebd {

std::size_t MpsState::max_bond_dim() const {
    std::size_t m = 1;
    for (const auto& l : lambdas) m = std::max(m, l.size());
    return m;
}

MpsState mps_product_state(const std::vector<std::size_t>& site_dims,
                           const std::vector<std::vector<cplx>>& local_states,
                           std::size_t chi_max, double trunc_tolerance) {
    if (site_dims.empty() || site_dims.size() != local_states.size())
        throw contract_violation("mps_product_state: one local state per site required");
    MpsState state;
    state.site_dims = site_dims;
    state.chi_max = chi_max;
    state.trunc_tolerance = trunc_tolerance;
    for (std::size_t k = 0; k < site_dims.size(); ++k) {
        const auto& v = local_states[k];
        if (v.size() != site_dims[k])
            throw contract_violation("mps_product_state: local state dimension mismatch");
        double norm_sq = 0.0;
        for (const cplx& z : v) norm_sq += std::norm(z);
        if (std::abs(norm_sq - 1.0) > 1e-10)
            throw contract_violation("mps_product_state: local state is not normalized");
        Tensor3 g(1, site_dims[k], 1);
        for (std::size_t i = 0; i < site_dims[k]; ++i) g.at(0, i, 0) = v[i];
        state.gammas.push_back(std::move(g));
    }
    state.lambdas.assign(site_dims.size() - 1, std::vector<double>{1.0});
    return state;
}

double schmidt_entropy(const MpsState& state, std::size_t bond) {
    if (bond >= state.lambdas.size()) throw contract_violation("schmidt_entropy: bad bond");
    double s = 0.0;
    for (double l : state.lambdas[bond]) {
        const double p = l * l;
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

cplx expectation_local(const MpsState& state, std::size_t site, const DenseMatrix& op) {
    if (site >= state.n_sites()) throw contract_violation("expectation_local: bad site");
    const std::size_t d = state.site_dims[site];
    if (op.rows() != d || op.cols() != d)
        throw contract_violation("expectation_local: operator dimension mismatch");
    const Tensor3& g = state.gammas[site];
    const std::vector<double> left_unit(g.dim_left, 1.0), right_unit(g.dim_right, 1.0);
    const std::vector<double>& ll = site > 0 ? state.lambdas[site - 1] : left_unit;
    const std::vector<double>& lr = site + 1 < state.n_sites() ? state.lambdas[site] : right_unit;
    cplx acc(0.0);
    for (std::size_t a = 0; a < g.dim_left; ++a) {
        const double wa = ll[a] * ll[a];
        for (std::size_t b = 0; b < g.dim_right; ++b) {
            const double w = wa * lr[b] * lr[b];
            for (std::size_t ip = 0; ip < d; ++ip)
                for (std::size_t i = 0; i < d; ++i)
                    acc += w * std::conj(g.at(a, ip, b)) * op(ip, i) * g.at(a, i, b);
        }
    }
    return acc;
}

std::vector<cplx> dense_coefficients(const MpsState& state) {
    std::size_t total = 1;
    for (std::size_t d : state.site_dims) {
        total *= d;
        if (total > (1u << 22))
            throw contract_violation("dense_coefficients: state too large to densify");
    }
    // Sweep left to right, absorbing each Gamma and bond lambda.
    std::vector<cplx> acc{cplx(1.0)};
    std::size_t chi = 1;  // current right bond dimension of acc (acc is blocks x chi)
    for (std::size_t k = 0; k < state.n_sites(); ++k) {
        const Tensor3& g = state.gammas[k];
        const std::size_t d = state.site_dims[k];
        const std::size_t chi_r = g.dim_right;
        const std::size_t blocks = acc.size() / chi;
        std::vector<cplx> next(blocks * d * chi_r, cplx(0.0));
        const bool has_right = k + 1 < state.n_sites();
        for (std::size_t blk = 0; blk < blocks; ++blk)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t b = 0; b < chi_r; ++b) {
                    cplx s(0.0);
                    for (std::size_t a = 0; a < chi; ++a)
                        s += acc[blk * chi + a] * g.at(a, i, b);
                    if (has_right) s *= state.lambdas[k][b];
                    next[(blk * d + i) * chi_r + b] = s;
                }
        acc = std::move(next);
        chi = chi_r;
    }
    return acc;  // chi == 1 at the right boundary
}

}  // namespace rrsvd::tebd
