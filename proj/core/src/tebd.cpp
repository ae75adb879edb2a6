#include "rrsvd/tebd.hpp"

#include <cblas.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"
#include "rrsvd/randomized.hpp"

namespace rrsvd::tebd {

namespace {

constexpr double kLambdaPseudoInverseFloor = 1e-14;

double now_us() {
    return std::chrono::duration<double, std::micro>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

DenseMatrix kron2(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

DenseMatrix pauli_x() {
    DenseMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
DenseMatrix pauli_y() {
    DenseMatrix m(2, 2);
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}
DenseMatrix pauli_z() {
    DenseMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

void add_scaled(DenseMatrix& into, const DenseMatrix& from, double scale) {
    for (std::size_t i = 0; i < into.size(); ++i) into.data()[i] += scale * from.data()[i];
}

}  // namespace

double ThetaTensor::frobenius() const {
    if (values.empty()) return 0.0;
    return cblas_dznrm2(static_cast<int>(values.size()), values.data(), 1);
}

TrotterPlan trotter_plan_3rd(double dt) {
    if (dt == 0.0) throw contract_violation("trotter_plan_3rd: dt must be nonzero");
    TrotterPlan plan;
    plan.dt = dt;
    plan.sweeps = {{1, 0.5}, {0, 1.0}, {1, 0.5}};
    plan.order = 3;
    return plan;
}

ThetaTensor build_theta(const MpsState& state, std::size_t bond) {
    if (bond + 1 >= state.n_sites()) throw contract_violation("build_theta: bad bond");
    const Tensor3& g1 = state.gammas[bond];
    const Tensor3& g2 = state.gammas[bond + 1];
    const std::size_t d1 = g1.dim_phys, d2 = g2.dim_phys;
    const std::size_t cl = g1.dim_left, cm = g1.dim_right, cr = g2.dim_right;
    // Open boundaries carry implicit unit weights.
    const std::vector<double> left_unit(cl, 1.0), right_unit(cr, 1.0);
    const std::vector<double>& ll = bond > 0 ? state.lambdas[bond - 1] : left_unit;
    const std::vector<double>& lm = state.lambdas[bond];
    const std::vector<double>& lr =
        bond + 2 < state.n_sites() ? state.lambdas[bond + 1] : right_unit;

    // Left factor (alpha i | gamma) and right factor (gamma | j beta) with the
    // bond lambdas absorbed.
    std::vector<cplx> left(cl * d1 * cm);
    for (std::size_t a = 0; a < cl; ++a)
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t g = 0; g < cm; ++g)
                left[(a * d1 + i) * cm + g] = ll[a] * g1.at(a, i, g) * lm[g];
    std::vector<cplx> right(cm * d2 * cr);
    for (std::size_t g = 0; g < cm; ++g)
        for (std::size_t j = 0; j < d2; ++j)
            for (std::size_t b = 0; b < cr; ++b)
                right[(g * d2 + j) * cr + b] = g2.at(g, j, b) * lr[b];

    // Contract over the shared bond into (alpha i | j beta) rows.
    const std::size_t jcols = d2 * cr;
    std::vector<cplx> mixed(cl * d1 * jcols, cplx(0.0));
    for (std::size_t row = 0; row < cl * d1; ++row) {
        cplx* out = &mixed[row * jcols];
        const cplx* lrow = &left[row * cm];
        for (std::size_t g = 0; g < cm; ++g) {
            const cplx f = lrow[g];
            if (f == cplx(0.0)) continue;
            const cplx* rrow = &right[g * jcols];
            for (std::size_t c = 0; c < jcols; ++c) out[c] += f * rrow[c];
        }
    }

    ThetaTensor theta(d1, d2, cl, cr);
    for (std::size_t a = 0; a < cl; ++a)
        for (std::size_t i = 0; i < d1; ++i) {
            const cplx* row = &mixed[(a * d1 + i) * jcols];
            for (std::size_t j = 0; j < d2; ++j)
                for (std::size_t b = 0; b < cr; ++b) theta.at(i, j, a, b) = row[j * cr + b];
        }
    return theta;
}

ThetaTensor apply_gate_to_theta(const ThetaTensor& theta, const TwoSiteGate& gate) {
    const std::size_t dd = theta.d_left * theta.d_right;
    if (gate.matrix.rows() != dd || gate.matrix.cols() != dd)
        throw contract_violation("apply_gate_to_theta: gate dimension mismatch");
    ThetaTensor out(theta.d_left, theta.d_right, theta.chi_left, theta.chi_right);
    const std::size_t cols = theta.chi_left * theta.chi_right;
    if (cols == 0 || dd == 0) return out;
    const cplx one(1.0), zero(0.0);
    cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(dd),
                static_cast<int>(cols), static_cast<int>(dd), &one, gate.matrix.data(),
                static_cast<int>(dd), theta.values.data(), static_cast<int>(cols), &zero,
                out.values.data(), static_cast<int>(cols));
    return out;
}

DecimationResult decimate(const ThetaTensor& theta, const std::vector<double>& lambda_left,
                          const std::vector<double>& lambda_right, std::size_t chi_max,
                          double trunc_tolerance, DecimationBackend& backend, bool renormalize) {
    const std::size_t d1 = theta.d_left, d2 = theta.d_right;
    const std::size_t cl = theta.chi_left, cr = theta.chi_right;
    const std::size_t rows = d1 * cl, cols = d2 * cr;
    const std::size_t minor = std::min(rows, cols);

    // Blocked unfolding: row (alpha, i), column (j, beta).
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            for (std::size_t a = 0; a < cl; ++a)
                for (std::size_t b = 0; b < cr; ++b)
                    m(a * d1 + i, j * cr + b) = theta.at(i, j, a, b);
    if (!m.all_finite()) throw contract_violation("decimate: theta has non-finite entries");

    const double total_norm = frobenius_norm(m);
    const double total_sq = total_norm * total_norm;
    if (total_sq == 0.0) throw contract_violation("decimate: theta is identically zero");

    const std::uint64_t call_seed = backend.seed++;
    DecimationResult res;
    SvdResult svd;
    bool cap_at_chi_max = true;

    const std::size_t k = backend.target_rank != 0 ? backend.target_rank : chi_max;
    const bool randomized = backend.kind == DecimationBackend::Kind::Randomized && k != 0 &&
                            minor > backend.det_crossover;
    if (randomized) {
        const std::size_t p = backend.oversampling != 0 ? backend.oversampling : k;
        const std::size_t l = std::min(k + p, minor);  // clamp to the minor dimension
        res.randomized_path = true;
        if (backend.accuracy_check && l + backend.probe_count <= cols && l + backend.probe_count <= minor) {
            AccuracyCheckParams check{backend.epsilon, backend.probe_count, 0};
            svd = rrsvd_fixed_precision(m, check, l, backend.power_iterations, call_seed);
            res.tolerance_certified = svd.tolerance_certified;
            // The accuracy check owns the retained rank: bond growth past the
            // nominal cap is the mechanism that keeps the error certified.
            cap_at_chi_max = false;
        } else {
            svd = rrsvd_sketched_svd(m, l, backend.power_iterations, call_seed);
        }
    } else {
        svd = svd_full(m);
    }

    // Truncation: tolerance first (normalized squared weight), then the cap.
    const double sigma1 = svd.sigma.empty() ? 0.0 : svd.sigma.front();
    std::size_t kept = 0;
    for (std::size_t i = 0; i < svd.sigma.size(); ++i) {
        const double s = svd.sigma[i];
        if (s <= sigma1 * 1e-15) break;  // numerically zero
        if (trunc_tolerance > 0.0 && s * s / total_sq < trunc_tolerance) break;
        ++kept;
    }
    kept = std::max<std::size_t>(kept, 1);
    if (cap_at_chi_max && chi_max != 0) kept = std::min(kept, chi_max);

    double kept_sq = 0.0;
    for (std::size_t i = 0; i < kept; ++i) kept_sq += svd.sigma[i] * svd.sigma[i];
    res.discarded = std::clamp(1.0 - kept_sq / total_sq, 0.0, 1.0);
    res.chi = kept;

    res.lambda.assign(svd.sigma.begin(), svd.sigma.begin() + static_cast<std::ptrdiff_t>(kept));
    if (renormalize) {
        const double scale = 1.0 / std::sqrt(kept_sq);
        for (double& l : res.lambda) l *= scale;
    }

    // Reabsorb the outer lambdas; near-zero entries go through a pseudo-inverse.
    const std::vector<double> left_unit(cl, 1.0), right_unit(cr, 1.0);
    const std::vector<double>& ll = lambda_left.empty() ? left_unit : lambda_left;
    const std::vector<double>& lr = lambda_right.empty() ? right_unit : lambda_right;
    if (ll.size() != cl || lr.size() != cr)
        throw contract_violation("decimate: outer lambda dimensions do not match theta");

    res.gamma_left = Tensor3(cl, d1, kept);
    for (std::size_t a = 0; a < cl; ++a) {
        const bool dead = ll[a] < kLambdaPseudoInverseFloor;
        if (dead) res.pseudo_inverse_applied = true;
        const double inv = dead ? 0.0 : 1.0 / ll[a];
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t g = 0; g < kept; ++g)
                res.gamma_left.at(a, i, g) = svd.u(a * d1 + i, g) * inv;
    }
    res.gamma_right = Tensor3(kept, d2, cr);
    for (std::size_t b = 0; b < cr; ++b) {
        const bool dead = lr[b] < kLambdaPseudoInverseFloor;
        if (dead) res.pseudo_inverse_applied = true;
        const double inv = dead ? 0.0 : 1.0 / lr[b];
        for (std::size_t g = 0; g < kept; ++g)
            for (std::size_t j = 0; j < d2; ++j)
                res.gamma_right.at(g, j, b) = std::conj(svd.v(j * cr + b, g)) * inv;
    }
    return res;
}

TwoSiteGate bond_gate(std::size_t bond, const DenseMatrix& h, double scale) {
    if (h.rows() != h.cols()) throw contract_violation("bond_gate: term must be square");
    double asym = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            asym = std::max(asym, std::abs(h(i, j) - std::conj(h(j, i))));
    if (asym > 1e-9 * std::max(1.0, h.max_abs()))
        throw contract_violation("bond_gate: term is not Hermitian");

    const HermitianEig eig = hermitian_eig(h);
    DenseMatrix phased = eig.vectors;  // columns scaled by exp(-i scale w)
    for (std::size_t i = 0; i < phased.rows(); ++i)
        for (std::size_t j = 0; j < phased.cols(); ++j)
            phased(i, j) *= std::exp(cplx(0.0, -scale * eig.values[j]));
    TwoSiteGate gate;
    gate.site = bond;
    gate.matrix = gemm(phased, false, eig.vectors, true);
    gate.unitary = true;
    return gate;
}

EvolveDiagnostics evolve(MpsState& state, const std::vector<HamiltonianTerm>& terms,
                         const TrotterPlan& plan, std::size_t n_steps,
                         DecimationBackend& backend, const EvolveOptions& options) {
    const std::size_t n_sites = state.n_sites();
    const std::size_t n_bonds = n_sites - 1;
    std::vector<const DenseMatrix*> bond_terms(n_bonds, nullptr);
    for (const auto& term : terms) {
        if (term.bond >= n_bonds) throw contract_violation("evolve: term bond out of range");
        if (bond_terms[term.bond] != nullptr)
            throw contract_violation("evolve: duplicate term on a bond");
        const std::size_t dd = state.site_dims[term.bond] * state.site_dims[term.bond + 1];
        if (term.h.rows() != dd || term.h.cols() != dd)
            throw contract_violation("evolve: term dimension mismatch");
        bond_terms[term.bond] = &term.h;
    }

    // One gate per (bond, sweep coefficient), built once.
    std::map<std::pair<std::size_t, double>, TwoSiteGate> gates;
    for (const auto& sweep : plan.sweeps)
        for (std::size_t b = 0; b < n_bonds; ++b) {
            if (static_cast<int>(b % 2) != sweep.bond_parity || bond_terms[b] == nullptr)
                continue;
            const auto key = std::make_pair(b, sweep.coefficient);
            if (!gates.count(key))
                gates.emplace(key, bond_gate(b, *bond_terms[b], sweep.coefficient * plan.dt));
        }

    EvolveDiagnostics diag;
    diag.max_bond_dim = state.max_bond_dim();
    for (std::size_t step = 0; step < n_steps; ++step) {
        for (const auto& sweep : plan.sweeps) {
            for (std::size_t b = static_cast<std::size_t>(sweep.bond_parity); b < n_bonds;
                 b += 2) {
                if (bond_terms[b] == nullptr) continue;
                const TwoSiteGate& gate = gates.at({b, sweep.coefficient});

                const double t0 = now_us();
                ThetaTensor theta = build_theta(state, b);
                const double t1 = now_us();
                ThetaTensor updated = apply_gate_to_theta(theta, gate);
                const double t2 = now_us();
                DecimationResult dec =
                    decimate(updated, b > 0 ? state.lambdas[b - 1] : std::vector<double>{},
                             b + 2 < n_sites ? state.lambdas[b + 1] : std::vector<double>{},
                             state.chi_max, state.trunc_tolerance, backend,
                             options.renormalize);
                const double t3 = now_us();

                state.gammas[b] = std::move(dec.gamma_left);
                state.lambdas[b] = std::move(dec.lambda);
                state.gammas[b + 1] = std::move(dec.gamma_right);

                diag.kept_fraction *= 1.0 - dec.discarded;
                diag.max_bond_dim = std::max(diag.max_bond_dim, dec.chi);
                if (options.record_updates)
                    diag.updates.push_back({step, b, dec.chi, dec.discarded, t1 - t0, t2 - t1,
                                            t3 - t2, dec.randomized_path});
                if (1.0 - diag.kept_fraction > options.abort_discarded_threshold) {
                    diag.aborted = true;
                    diag.abort_step = step;
                    return diag;
                }
            }
        }
    }
    return diag;
}

std::vector<cplx> dense_oracle_evolve(const std::vector<cplx>& initial,
                                      const std::vector<std::size_t>& site_dims,
                                      const std::vector<HamiltonianTerm>& terms, double time) {
    std::size_t total = 1;
    for (std::size_t d : site_dims) {
        total *= d;
        if (total > 8192)
            throw contract_violation("dense_oracle_evolve: total dimension too large");
    }
    if (initial.size() != total)
        throw contract_violation("dense_oracle_evolve: initial vector dimension mismatch");

    DenseMatrix h(total, total);
    for (const auto& term : terms) {
        const std::size_t b = term.bond;
        if (b + 1 >= site_dims.size())
            throw contract_violation("dense_oracle_evolve: term bond out of range");
        std::size_t left = 1, right = 1;
        for (std::size_t k = 0; k < b; ++k) left *= site_dims[k];
        for (std::size_t k = b + 2; k < site_dims.size(); ++k) right *= site_dims[k];
        const std::size_t mid = site_dims[b] * site_dims[b + 1];
        if (term.h.rows() != mid || term.h.cols() != mid)
            throw contract_violation("dense_oracle_evolve: term dimension mismatch");
        for (std::size_t l = 0; l < left; ++l)
            for (std::size_t x = 0; x < mid; ++x)
                for (std::size_t y = 0; y < mid; ++y) {
                    const cplx v = term.h(x, y);
                    if (v == cplx(0.0)) continue;
                    for (std::size_t r = 0; r < right; ++r)
                        h((l * mid + x) * right + r, (l * mid + y) * right + r) += v;
                }
    }

    const HermitianEig eig = hermitian_eig(h);
    // psi(T) = W exp(-i w T) W^H psi(0)
    std::vector<cplx> proj(total, cplx(0.0));
    for (std::size_t j = 0; j < total; ++j)
        for (std::size_t i = 0; i < total; ++i)
            proj[j] += std::conj(eig.vectors(i, j)) * initial[i];
    for (std::size_t j = 0; j < total; ++j)
        proj[j] *= std::exp(cplx(0.0, -eig.values[j] * time));
    std::vector<cplx> out(total, cplx(0.0));
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j) out[i] += eig.vectors(i, j) * proj[j];
    return out;
}

std::vector<HamiltonianTerm> ising_terms(std::size_t n_sites, double coupling, double field) {
    if (n_sites < 2) throw contract_violation("ising_terms: need at least two sites");
    const DenseMatrix sx = pauli_x(), sz = pauli_z(), id = DenseMatrix::identity(2);
    const DenseMatrix zz = kron2(sz, sz), xl = kron2(sx, id), xr = kron2(id, sx);
    std::vector<HamiltonianTerm> terms;
    for (std::size_t b = 0; b + 1 < n_sites; ++b) {
        DenseMatrix h(4, 4);
        add_scaled(h, zz, -coupling);
        add_scaled(h, xl, -field * (b == 0 ? 1.0 : 0.5));
        add_scaled(h, xr, -field * (b + 2 == n_sites ? 1.0 : 0.5));
        terms.push_back({b, std::move(h)});
    }
    return terms;
}

std::vector<HamiltonianTerm> heisenberg_terms(std::size_t n_sites, double coupling) {
    if (n_sites < 2) throw contract_violation("heisenberg_terms: need at least two sites");
    const DenseMatrix xx = kron2(pauli_x(), pauli_x());
    const DenseMatrix yy = kron2(pauli_y(), pauli_y());
    const DenseMatrix zz = kron2(pauli_z(), pauli_z());
    std::vector<HamiltonianTerm> terms;
    for (std::size_t b = 0; b + 1 < n_sites; ++b) {
        DenseMatrix h(4, 4);
        add_scaled(h, xx, coupling);
        add_scaled(h, yy, coupling);
        add_scaled(h, zz, coupling);
        terms.push_back({b, std::move(h)});
    }
    return terms;
}

}  // namespace rrsvd::tebd
