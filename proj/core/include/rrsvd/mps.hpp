#ifndef RRSVD_MPS_HPP
#define RRSVD_MPS_HPP

#include <cstddef>
#include <vector>

#include "rrsvd/dense_matrix.hpp"

namespace rrsvd::tebd {

// Rank-3 tensor indexed (left bond, physical, right bond), row-major.
struct Tensor3 {
    std::size_t dim_left = 0, dim_phys = 0, dim_right = 0;
    std::vector<cplx> values;

    Tensor3() = default;
    Tensor3(std::size_t l, std::size_t d, std::size_t r)
        : dim_left(l), dim_phys(d), dim_right(r), values(l * d * r, cplx(0.0)) {}

    cplx& at(std::size_t a, std::size_t i, std::size_t b) {
        return values[(a * dim_phys + i) * dim_right + b];
    }
    const cplx& at(std::size_t a, std::size_t i, std::size_t b) const {
        return values[(a * dim_phys + i) * dim_right + b];
    }
};

// Canonical-form MPS: per-site Gamma tensors and per-bond Schmidt vectors.
// lambdas[b] sits on the bond between sites b and b+1; each vector is
// non-increasing, positive, and normalized to sum of squares 1.
struct MpsState {
    std::vector<std::size_t> site_dims;
    std::vector<Tensor3> gammas;
    std::vector<std::vector<double>> lambdas;
    std::size_t chi_max = 0;  // 0 means unbounded
    double trunc_tolerance = 0.0;

    std::size_t n_sites() const { return site_dims.size(); }
    std::size_t bond_dim(std::size_t bond) const { return lambdas[bond].size(); }
    std::size_t max_bond_dim() const;
};

// Product state from per-site unit vectors; all bond dimensions are 1.
MpsState mps_product_state(const std::vector<std::size_t>& site_dims,
                           const std::vector<std::vector<cplx>>& local_states,
                           std::size_t chi_max = 0, double trunc_tolerance = 0.0);

// Von Neumann entropy -sum lambda^2 ln lambda^2 at a bond.
double schmidt_entropy(const MpsState& state, std::size_t bond);

// <psi| op_site |psi> for a single-site operator, via the canonical form.
cplx expectation_local(const MpsState& state, std::size_t site, const DenseMatrix& op);

// Full state vector (site 0 index slowest). Only for small chains; guarded.
std::vector<cplx> dense_coefficients(const MpsState& state);

}  // namespace rrsvd::tebd

#endif
