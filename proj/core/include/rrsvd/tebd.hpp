#ifndef RRSVD_TEBD_HPP
#define RRSVD_TEBD_HPP

#include <cstdint>
#include <vector>

#include "rrsvd/dense_matrix.hpp"
#include "rrsvd/mps.hpp"

namespace rrsvd::tebd {

// Fourth-order two-site tensor, indexed (i_left, i_right, alpha, beta) with
// row-major layout. (i_left, i_right) are the two physical indices, (alpha,
// beta) the outer bond indices.
struct ThetaTensor {
    std::size_t d_left = 0, d_right = 0, chi_left = 0, chi_right = 0;
    std::vector<cplx> values;

    ThetaTensor() = default;
    ThetaTensor(std::size_t dl, std::size_t dr, std::size_t cl, std::size_t cr)
        : d_left(dl), d_right(dr), chi_left(cl), chi_right(cr), values(dl * dr * cl * cr, cplx(0.0)) {}

    cplx& at(std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
        return values[((i * d_right + j) * chi_left + a) * chi_right + b];
    }
    const cplx& at(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
        return values[((i * d_right + j) * chi_left + a) * chi_right + b];
    }

    double frobenius() const;
};

// Two-site gate acting on sites (site, site+1); matrix rows/cols are the
// combined physical index i_left * d_right + i_right.
struct TwoSiteGate {
    std::size_t site = 0;
    DenseMatrix matrix;
    bool unitary = false;
};

// One nearest-neighbor Hamiltonian term per bond; h acts on the combined
// two-site space of bond `bond` (sites bond, bond+1).
struct HamiltonianTerm {
    std::size_t bond;
    DenseMatrix h;
};

// Symmetric splitting exp(-iH dt) ~ exp(-i F dt/2) exp(-i G dt) exp(-i F dt/2)
// with O(dt^3) one-step error. Each sweep applies all bonds whose 0-based
// index has the stored parity. F acts on odd 0-based bonds (even bonds when
// counting from 1).
struct TrotterPlan {
    struct Sweep {
        int bond_parity;     // 0-based bond index modulo 2
        double coefficient;  // fraction of dt applied in this sweep
    };
    double dt = 0.0;
    std::vector<Sweep> sweeps;
    int order = 3;
};

TrotterPlan trotter_plan_3rd(double dt);

// How the decimation step factorizes the unfolded two-site tensor.
struct DecimationBackend {
    enum class Kind { Deterministic, Randomized };
    Kind kind = Kind::Deterministic;

    // Randomized-path parameters. target_rank == 0 uses the state's chi_max.
    std::size_t target_rank = 0;
    std::size_t oversampling = 0;  // 0 mirrors the target rank
    std::size_t power_iterations = 2;

    // Optional accuracy check (fixed-precision mode) with bond growth.
    bool accuracy_check = false;
    double epsilon = 1e-3;
    std::size_t probe_count = 10;

    // Unfoldings whose minor dimension is at most this use the deterministic
    // path; randomization only pays off for large matrices.
    std::size_t det_crossover = 256;

    // Base seed; advanced by one per decimation call.
    std::uint64_t seed = 0;
};

struct DecimationResult {
    Tensor3 gamma_left;
    std::vector<double> lambda;
    Tensor3 gamma_right;
    double discarded = 0.0;
    std::size_t chi = 0;
    bool randomized_path = false;
    bool tolerance_certified = true;
    bool pseudo_inverse_applied = false;
};

ThetaTensor build_theta(const MpsState& state, std::size_t bond);

ThetaTensor apply_gate_to_theta(const ThetaTensor& theta, const TwoSiteGate& gate);

// Unfold theta to a (d_left*chi_left) x (d_right*chi_right) matrix, factorize
// with the selected backend, truncate (tolerance first, then the chi cap),
// renormalize the kept Schmidt values, and reabsorb the outer bond lambdas.
// Outer lambdas below 1e-14 are treated by pseudo-inverse (rows zeroed).
// Advances backend.seed.
DecimationResult decimate(const ThetaTensor& theta, const std::vector<double>& lambda_left,
                          const std::vector<double>& lambda_right, std::size_t chi_max,
                          double trunc_tolerance, DecimationBackend& backend,
                          bool renormalize = true);

// exp(-i scale h) for a Hermitian two-site term, via eigendecomposition.
TwoSiteGate bond_gate(std::size_t bond, const DenseMatrix& h, double scale);

struct UpdateRecord {
    std::size_t step;
    std::size_t bond;
    std::size_t chi;
    double discarded_weight;
    double t_theta_us;
    double t_gate_us;
    double t_svd_us;
    bool randomized_path;
};

struct EvolveOptions {
    double abort_discarded_threshold = 1.0;  // cumulative fraction; 1 never aborts
    bool renormalize = true;
    bool record_updates = true;
};

struct EvolveDiagnostics {
    std::vector<UpdateRecord> updates;
    double kept_fraction = 1.0;  // product of (1 - w) over all truncations
    std::size_t max_bond_dim = 1;
    bool aborted = false;
    std::size_t abort_step = 0;
};

// Applies `n_steps` Trotter steps of the bond Hamiltonians to the state.
// Gates are built once per (bond, sweep coefficient) pair and reused.
EvolveDiagnostics evolve(MpsState& state, const std::vector<HamiltonianTerm>& terms,
                         const TrotterPlan& plan, std::size_t n_steps,
                         DecimationBackend& backend, const EvolveOptions& options = {});

// Exact reference propagation: assembles the dense Hamiltonian from the bond
// terms and applies exp(-i H T). Guarded to small total dimensions.
std::vector<cplx> dense_oracle_evolve(const std::vector<cplx>& initial,
                                      const std::vector<std::size_t>& site_dims,
                                      const std::vector<HamiltonianTerm>& terms, double time);

// Model builders. Single-site fields are split evenly between the two adjacent
// bonds (full share at the chain ends), so the bond terms sum to the full H.
// Transverse-field Ising: H = -J sum sz sz - g sum sx.
std::vector<HamiltonianTerm> ising_terms(std::size_t n_sites, double coupling, double field);
// Isotropic Heisenberg: H = J sum (sx sx + sy sy + sz sz), Pauli convention.
std::vector<HamiltonianTerm> heisenberg_terms(std::size_t n_sites, double coupling);

}  // namespace rrsvd::tebd

#endif
