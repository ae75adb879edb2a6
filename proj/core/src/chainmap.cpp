#include "rrsvd/chainmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"

namespace rrsvd::chainmap {

namespace {

double dot(const std::vector<double>& w, const std::vector<double>& a,
           const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
    return s;
}

// Piecewise-linear interpolation of y(xs) at x; xs strictly increasing.
double interp(const std::vector<double>& xs, const std::vector<double>& y, double x) {
    if (x <= xs.front()) return y.front();
    if (x >= xs.back()) return y.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return y[lo] + t * (y[hi] - y[lo]);
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

MeasureGrid make_measure(std::vector<double> nodes, std::vector<double> weights) {
    if (nodes.size() != weights.size() || nodes.empty())
        throw contract_violation("make_measure: need matching non-empty nodes and weights");
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0 && nodes[i] <= nodes[i - 1])
            throw contract_violation("make_measure: nodes must be strictly increasing");
        if (weights[i] < 0.0) throw contract_violation("make_measure: negative weight");
        total += weights[i];
    }
    if (total <= 0.0) throw contract_violation("make_measure: total weight must be positive");
    return {std::move(nodes), std::move(weights)};
}

MeasureGrid trapezoid_measure(const std::vector<double>& nodes, const std::vector<double>& h2) {
    if (nodes.size() != h2.size() || nodes.size() < 2)
        throw contract_violation("trapezoid_measure: need at least two matching samples");
    const std::size_t n = nodes.size();
    std::vector<double> w(n);
    w[0] = 0.5 * (nodes[1] - nodes[0]);
    w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
    for (std::size_t i = 0; i < n; ++i) w[i] *= h2[i];
    return make_measure(nodes, std::move(w));
}

std::vector<double> spectral_density(const SpectralDensityInput& input,
                                     const std::vector<double>& omega_grid) {
    const std::size_t n = input.x.size();
    if (n < 3 || input.g.size() != n || input.h.size() != n)
        throw contract_violation("spectral_density: need >= 3 matching samples");
    const bool increasing = input.g[1] > input.g[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double d = input.g[i] - input.g[i - 1];
        if (d == 0.0 || (d > 0.0) != increasing)
            throw contract_violation("spectral_density: g must be strictly monotone");
    }
    // Tabulate the inverse dispersion on the g values.
    std::vector<double> gv = input.g, xv = input.x;
    if (!increasing) {
        std::reverse(gv.begin(), gv.end());
        std::reverse(xv.begin(), xv.end());
    }
    if (omega_grid.size() < 3)
        throw contract_violation("spectral_density: omega grid too short");
    std::vector<double> x_of_w(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw contract_violation("spectral_density: omega grid must be increasing");
        if (omega_grid[i] < gv.front() || omega_grid[i] > gv.back())
            throw contract_violation("spectral_density: omega outside dispersion range");
        x_of_w[i] = interp(gv, xv, omega_grid[i]);
    }
    std::vector<double> out(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == omega_grid.size() ? i : i + 1;
        const double dxdw = (x_of_w[hi] - x_of_w[lo]) / (omega_grid[hi] - omega_grid[lo]);
        const double hx = interp(input.x, input.h, x_of_w[i]);
        out[i] = std::numbers::pi * hx * hx * std::abs(dxdw);
    }
    return out;
}

ChainCoefficients stieltjes_coefficients(const MeasureGrid& measure, std::size_t n_chain) {
    const std::size_t n_nodes = measure.nodes.size();
    if (n_chain < 1 || n_chain > n_nodes)
        throw contract_violation("stieltjes_coefficients: requires 1 <= n_chain <= node count");
    const std::vector<double>& x = measure.nodes;
    const std::vector<double>& w = measure.weights;

    std::vector<std::vector<double>> polys;  // orthonormal on the grid
    std::vector<double> alpha(n_chain, 0.0), beta(n_chain, 0.0);
    double beta0 = 0.0;
    for (double wi : w) beta0 += wi;

    std::vector<double> p0(n_nodes, 1.0 / std::sqrt(beta0));
    polys.push_back(std::move(p0));
    for (std::size_t j = 0; j < n_chain; ++j) {
        const std::vector<double>& pj = polys[j];
        std::vector<double> u(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) u[i] = x[i] * pj[i];
        alpha[j] = dot(w, u, pj);
        if (j + 1 == n_chain) break;  // last site needs no further polynomial
        for (std::size_t i = 0; i < n_nodes; ++i) u[i] -= alpha[j] * pj[i];
        if (j > 0) {
            const double tprev = std::sqrt(beta[j - 1]);
            for (std::size_t i = 0; i < n_nodes; ++i) u[i] -= tprev * polys[j - 1][i];
        }
        // Full reorthogonalization; twice is enough.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& pk : polys) {
                const double c = dot(w, u, pk);
                for (std::size_t i = 0; i < n_nodes; ++i) u[i] -= c * pk[i];
            }
        const double b = dot(w, u, u);
        if (!(b > 0.0) || !std::isfinite(b)) throw recurrence_breakdown(j + 1);
        beta[j] = b;
        const double inv = 1.0 / std::sqrt(b);
        for (std::size_t i = 0; i < n_nodes; ++i) u[i] *= inv;
        polys.push_back(std::move(u));
    }

    ChainCoefficients out;
    out.t0 = std::sqrt(beta0);
    out.omegas = std::move(alpha);
    out.hoppings.assign(n_chain - 1, 0.0);
    for (std::size_t j = 0; j + 1 < n_chain; ++j) out.hoppings[j] = std::sqrt(beta[j]);
    return out;
}

double stieltjes_orthonormality_residual(const MeasureGrid& measure, std::size_t n_chain) {
    const std::size_t n_nodes = measure.nodes.size();
    if (n_chain < 1 || n_chain > n_nodes)
        throw contract_violation("stieltjes_orthonormality_residual: bad n_chain");
    const ChainCoefficients coeffs = stieltjes_coefficients(measure, n_chain);
    // Rebuild the orthonormal polynomials from the returned coefficients and
    // measure their Gram residual on the grid.
    std::vector<std::vector<double>> polys;
    polys.push_back(std::vector<double>(n_nodes, 1.0 / coeffs.t0));
    for (std::size_t j = 0; j + 1 < n_chain; ++j) {
        std::vector<double> u(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i)
            u[i] = (measure.nodes[i] - coeffs.omegas[j]) * polys[j][i];
        if (j > 0)
            for (std::size_t i = 0; i < n_nodes; ++i)
                u[i] -= coeffs.hoppings[j - 1] * polys[j - 1][i];
        for (std::size_t i = 0; i < n_nodes; ++i) u[i] /= coeffs.hoppings[j];
        polys.push_back(std::move(u));
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i; j < polys.size(); ++j) {
            const double g = dot(measure.weights, polys[i], polys[j]);
            residual = std::max(residual, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    return residual;
}

DenseMatrix boson_annihilation(std::size_t d) {
    if (d < 2) throw contract_violation("boson_annihilation: d >= 2 required");
    DenseMatrix b(d, d);
    for (std::size_t k = 1; k < d; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
    return b;
}

DenseMatrix boson_number(std::size_t d) {
    if (d < 2) throw contract_violation("boson_number: d >= 2 required");
    DenseMatrix n(d, d);
    for (std::size_t k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

ChainSystem build_chain_terms(const ChainCoefficients& coeffs, std::size_t boson_dim,
                              const DenseMatrix& system_term, const DenseMatrix& coupling_op) {
    const std::size_t n_chain = coeffs.omegas.size();
    if (n_chain < 1) throw contract_violation("build_chain_terms: empty chain");
    if (boson_dim < 2) throw contract_violation("build_chain_terms: boson_dim >= 2 required");
    if (system_term.rows() != system_term.cols() || coupling_op.rows() != coupling_op.cols() ||
        system_term.rows() != coupling_op.rows())
        throw contract_violation("build_chain_terms: system operators must be square and match");
    if (coeffs.hoppings.size() + 1 != n_chain)
        throw contract_violation("build_chain_terms: hoppings/omegas length mismatch");

    const std::size_t d_sys = system_term.rows();
    const DenseMatrix b = boson_annihilation(boson_dim);
    const DenseMatrix bdag = adjoint(b);
    const DenseMatrix num = boson_number(boson_dim);
    const DenseMatrix id_b = DenseMatrix::identity(boson_dim);
    const DenseMatrix id_sys = DenseMatrix::identity(d_sys);

    auto kron = [](const DenseMatrix& a, const DenseMatrix& c) {
        DenseMatrix out(a.rows() * c.rows(), a.cols() * c.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                for (std::size_t k = 0; k < c.rows(); ++k)
                    for (std::size_t l = 0; l < c.cols(); ++l)
                        out(i * c.rows() + k, j * c.cols() + l) = a(i, j) * c(k, l);
        return out;
    };
    auto add = [](DenseMatrix& into, const DenseMatrix& from, double s) {
        for (std::size_t i = 0; i < into.size(); ++i) into.data()[i] += s * from.data()[i];
    };

    // Share of omega_n assigned to the bond on the left of boson n.
    auto left_share = [&](std::size_t n) { return n + 1 == n_chain ? 1.0 : 0.5; };

    ChainSystem sys;
    sys.site_dims.push_back(d_sys);
    for (std::size_t i = 0; i < n_chain; ++i) sys.site_dims.push_back(boson_dim);

    {  // system <-> boson 0
        DenseMatrix h = kron(system_term, id_b);
        DenseMatrix displacement = b;
        add(displacement, bdag, 1.0);
        add(h, kron(coupling_op, displacement), coeffs.t0);
        add(h, kron(id_sys, num), left_share(0) * coeffs.omegas[0]);
        sys.bond_terms.push_back({0, std::move(h)});
    }
    for (std::size_t n = 1; n < n_chain; ++n) {  // boson n-1 <-> boson n
        DenseMatrix h(boson_dim * boson_dim, boson_dim * boson_dim);
        add(h, kron(bdag, b), coeffs.hoppings[n - 1]);
        add(h, kron(b, bdag), coeffs.hoppings[n - 1]);
        add(h, kron(num, id_b), (1.0 - left_share(n - 1)) * coeffs.omegas[n - 1]);
        add(h, kron(id_b, num), left_share(n) * coeffs.omegas[n]);
        sys.bond_terms.push_back({n, std::move(h)});
    }
    return sys;
}

MeasureGrid read_measure_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw contract_violation("cannot open measure file: " + path);
    std::vector<double> nodes, weights;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double x = 0.0, w = 0.0;
        if (!(ss >> x >> w)) throw contract_violation("bad measure line: " + line);
        nodes.push_back(x);
        weights.push_back(w);
    }
    return make_measure(std::move(nodes), std::move(weights));
}

void write_coefficients_file(const std::string& path, const ChainCoefficients& coeffs) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw contract_violation("cannot open coefficients file for writing: " + path);
    for (std::size_t n = 0; n < coeffs.omegas.size(); ++n) {
        const double t = n == 0 ? coeffs.t0 : coeffs.hoppings[n - 1];
        f << n << ' ' << format_double(coeffs.omegas[n]) << ' ' << format_double(t) << '\n';
    }
    if (!f) throw contract_violation("write failed: " + path);
}

ChainCoefficients read_coefficients_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw contract_violation("cannot open coefficients file: " + path);
    ChainCoefficients out;
    std::string line;
    std::vector<double> ts;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::size_t n = 0;
        double omega = 0.0, t = 0.0;
        if (!(ss >> n >> omega >> t)) throw contract_violation("bad coefficients line: " + line);
        if (n != out.omegas.size())
            throw contract_violation("coefficients file rows out of order: " + path);
        out.omegas.push_back(omega);
        ts.push_back(t);
    }
    if (out.omegas.empty()) throw contract_violation("empty coefficients file: " + path);
    out.t0 = ts[0];
    out.hoppings.assign(ts.begin() + 1, ts.end());
    return out;
}

}  // namespace rrsvd::chainmap
