#ifndef RRSVD_CHAINMAP_HPP
#define RRSVD_CHAINMAP_HPP

#include <string>
#include <vector>

#include "rrsvd/dense_matrix.hpp"
#include "rrsvd/tebd.hpp"

// Chain mapping of a continuous bosonic environment: orthogonal-polynomial
// recurrence coefficients of the coupling measure become the on-site
// frequencies and hoppings of a nearest-neighbor chain. The discretized
// Stieltjes procedure follows Gautschi's orthogonal-polynomial toolkit.

namespace rrsvd::chainmap {

// Discrete measure sum_i w_i delta(x - x_i); nodes strictly increasing,
// weights w_i = h^2(x_i) dx_i for a sampled coupling.
struct MeasureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Coefficients of the mapped chain: t0 couples the system to chain site 0,
// omegas[n] is the on-site frequency of chain site n, hoppings[n] couples
// chain sites n and n+1.
struct ChainCoefficients {
    double t0 = 0.0;
    std::vector<double> omegas;
    std::vector<double> hoppings;
};

// Sampled dispersion g(x) and coupling h(x) on a common grid.
struct SpectralDensityInput {
    std::vector<double> x;
    std::vector<double> g;
    std::vector<double> h;
    double x_max = 0.0;
};

// Validates node ordering and positivity of the total weight.
MeasureGrid make_measure(std::vector<double> nodes, std::vector<double> weights);

// Trapezoid-weight measure w_i = h2(x_i) * dx_i from samples of h^2.
MeasureGrid trapezoid_measure(const std::vector<double>& nodes, const std::vector<double>& h2);

// J(w) = pi h^2(g^{-1}(w)) |d g^{-1}/ d w| on the given frequency grid, with
// centered finite differences for the derivative. Requires strictly monotone g.
std::vector<double> spectral_density(const SpectralDensityInput& input,
                                     const std::vector<double>& omega_grid);

// Recurrence coefficients of the measure's orthonormal polynomials via the
// discretized Stieltjes procedure with full reorthogonalization:
// omegas[n] = alpha_n, hoppings[n] = sqrt(beta_{n+1}), t0 = sqrt(beta_0).
// Throws recurrence_breakdown when a beta loses positivity.
ChainCoefficients stieltjes_coefficients(const MeasureGrid& measure, std::size_t n_chain);

// Gram residual max |<p_i, p_j> - delta_ij| of the polynomials rebuilt from
// the returned coefficients; a diagnostic for coefficient quality.
double stieltjes_orthonormality_residual(const MeasureGrid& measure, std::size_t n_chain);

// Truncated ladder operators on a d-level boson space.
DenseMatrix boson_annihilation(std::size_t d);
DenseMatrix boson_number(std::size_t d);

struct ChainSystem {
    std::vector<std::size_t> site_dims;              // system first, then bosons
    std::vector<tebd::HamiltonianTerm> bond_terms;
};

// Nearest-neighbor bond Hamiltonians for H_sys + t0 A (b0 + b0^+) +
// sum omega_n b_n^+ b_n + sum t_n (b_n^+ b_{n+1} + h.c.) on d_max-level boson
// spaces. On-site terms are split evenly between adjacent bonds, with the full
// share at the chain ends; H_sys goes to the first bond.
ChainSystem build_chain_terms(const ChainCoefficients& coeffs, std::size_t boson_dim,
                              const DenseMatrix& system_term, const DenseMatrix& coupling_op);

// Two-column text (node, weight), one pair per line.
MeasureGrid read_measure_file(const std::string& path);

// Three-column text (n, omega_n, t_n) where t_0 is the system coupling and
// t_n couples chain sites n-1 and n.
void write_coefficients_file(const std::string& path, const ChainCoefficients& coeffs);
ChainCoefficients read_coefficients_file(const std::string& path);

}  // namespace rrsvd::chainmap

#endif
