#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>

#include "csv.hpp"
#include "rrsvd/chainmap.hpp"
#include "rrsvd/errors.hpp"
#include "rrsvd/linalg.hpp"
#include "rrsvd/matrix_io.hpp"
#include "rrsvd/randomized.hpp"
#include "rrsvd/tebd.hpp"

extern "C" void openblas_set_num_threads(int);

namespace rrsvd::bench {

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    return base + 0x9e3779b97f4a7c15ull * (salt + 1);
}

DenseMatrix pauli(char which) {
    DenseMatrix m(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw contract_violation("unknown Pauli");
    }
    return m;
}

}  // namespace

void set_blas_threads(int threads) {
    if (threads > 0) openblas_set_num_threads(threads);
}

SpectrumSpec parse_spectrum(const std::string& text, std::size_t n) {
    if (text == "power") return spectrum_power(n);
    if (text.rfind("exp:", 0) == 0) {
        const double ratio = std::stod(text.substr(4));
        return spectrum_exponential(n, ratio);
    }
    if (text.rfind("file:", 0) == 0) {
        std::vector<double> values = read_value_lines(text.substr(5));
        if (values.size() < n)
            throw contract_violation("spectrum file has fewer values than requested");
        values.resize(n);
        return make_spectrum(std::move(values), "file");
    }
    throw contract_violation("unknown spectrum spec: " + text +
                             " (expected exp:RATIO, power, or file:PATH)");
}

int run_matgen(const MatgenConfig& config) {
    if (config.rows == 0 || config.cols == 0 || config.out.empty()) {
        std::cerr << "matgen: --rows, --cols and --out are required\n";
        return kExitUsage;
    }
    SpectrumSpec spec;
    try {
        spec = parse_spectrum(config.spectrum, config.cols);
    } catch (const std::exception& e) {
        std::cerr << "matgen: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const StructuredInstance inst = structured_matrix(
            spec, config.rows, config.seed, mix_seed(config.seed, 1));
        write_rrsm(config.out, inst.matrix);
        write_value_lines(config.out + ".spectrum.txt", spec.values);
    } catch (const std::exception& e) {
        std::cerr << "matgen: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}

int run_svd_bench(const SvdBenchConfig& config) {
    set_blas_threads(config.threads);
    if (config.out.empty()) {
        std::cerr << "svd-bench: --out required\n";
        return kExitUsage;
    }
    struct Size {
        std::size_t rows, cols;
    };
    std::vector<Size> sizes;
    if (config.rows != 0 && config.cols != 0)
        sizes.push_back({config.rows, config.cols});
    else
        for (std::size_t s : config.sizes) sizes.push_back({s, s});
    if (sizes.empty() || config.trials < 1) {
        std::cerr << "svd-bench: need sizes and at least one trial\n";
        return kExitUsage;
    }
    for (const Size& s : sizes)
        if (s.cols < config.k + config.p || s.rows < s.cols) {
            std::cerr << "svd-bench: size too small for k + p\n";
            return kExitUsage;
        }

    CsvWriter csv(config.out,
                  {"record", "experiment", "rows", "cols", "k", "p", "q", "trial", "seed",
                   "threads", "algo", "wall_seconds", "max_abs_sv_error", "residual_fro",
                   "speedup"});
    for (const Size& size : sizes) {
        try {
            const SpectrumSpec spec = parse_spectrum(config.spectrum, size.cols);
            const StructuredInstance inst =
                structured_matrix(spec, size.rows, mix_seed(config.seed, size.rows),
                                  mix_seed(config.seed, size.rows + 1));
            const double a_norm = frobenius_norm(inst.matrix);

            std::vector<double> det_walls;
            double det_err = 0.0, det_res = 0.0;
            for (std::size_t trial = 0; trial < config.trials; ++trial) {
                const double t0 = now_s();
                const SvdResult full = svd_full(inst.matrix);
                const double wall = now_s() - t0;
                det_walls.push_back(wall);
                det_err = 0.0;
                for (std::size_t i = 0; i < config.k; ++i)
                    det_err = std::max(det_err, std::abs(full.sigma[i] - spec.values[i]));
                double tail = 0.0;
                for (std::size_t i = config.k; i < full.sigma.size(); ++i)
                    tail += full.sigma[i] * full.sigma[i];
                det_res = std::sqrt(tail);
                csv.field("trial").field("svd-bench").field(size.rows).field(size.cols)
                    .field(config.k).field(config.p).field(std::size_t{0}).field(trial)
                    .field(config.seed).field(config.threads).field("det").field(wall)
                    .field(det_err).field(det_res).field(0.0);
                csv.end_row();
            }

            for (std::size_t q : config.qs) {
                std::vector<double> rr_walls;
                for (std::size_t trial = 0; trial < config.trials; ++trial) {
                    const std::uint64_t seed = mix_seed(config.seed, 1000 + 7 * trial + q);
                    const double t0 = now_s();
                    const SvdResult rr =
                        rrsvd_fixed_rank(inst.matrix, {config.k, config.p, q, seed});
                    const double wall = now_s() - t0;
                    rr_walls.push_back(wall);
                    double err = 0.0;
                    for (std::size_t i = 0; i < config.k; ++i)
                        err = std::max(err, std::abs(rr.sigma[i] - spec.values[i]));
                    const double res = std::sqrt(rr.discarded_weight) * a_norm;
                    csv.field("trial").field("svd-bench").field(size.rows).field(size.cols)
                        .field(config.k).field(config.p).field(q).field(trial).field(seed)
                        .field(config.threads).field("rrsvd").field(wall).field(err)
                        .field(res).field(0.0);
                    csv.end_row();
                }
                const double speedup = median(det_walls) / median(rr_walls);
                csv.field("summary").field("svd-bench").field(size.rows).field(size.cols)
                    .field(config.k).field(config.p).field(q).field(std::size_t{0})
                    .field(config.seed).field(config.threads).field("median_speedup")
                    .field(median(rr_walls)).field(0.0).field(0.0).field(speedup);
                csv.end_row();
            }
        } catch (const std::bad_alloc&) {
            csv.field("skipped").field("svd-bench").field(size.rows).field(size.cols)
                .field(config.k).field(config.p).field(std::size_t{0}).field(std::size_t{0})
                .field(config.seed).field(config.threads).field("alloc-failure").field(0.0)
                .field(0.0).field(0.0).field(0.0);
            csv.end_row();
        }
    }
    return kExitOk;
}

int run_stability(const StabilityConfig& config) {
    set_blas_threads(config.threads);
    if (config.out.empty()) {
        std::cerr << "stability: --out required\n";
        return kExitUsage;
    }
    if (config.cols < config.k + config.p || config.rows < config.cols) {
        std::cerr << "stability: size too small for k + p\n";
        return kExitUsage;
    }
    SpectrumSpec spec;
    try {
        spec = parse_spectrum(config.spectrum, config.cols);
    } catch (const std::exception& e) {
        std::cerr << "stability: " << e.what() << "\n";
        return kExitUsage;
    }

    CsvWriter csv(config.out, {"experiment", "instance", "rerun", "q", "index", "sigma_ref",
                               "sigma_got", "abs_error", "algo"});
    for (std::size_t instance = 0; instance < config.instances; ++instance) {
        const StructuredInstance inst =
            structured_matrix(spec, config.rows, mix_seed(config.seed, 2 * instance),
                              mix_seed(config.seed, 2 * instance + 1));
        const SvdResult det = svd_full(inst.matrix);
        for (std::size_t i = 0; i < config.k; ++i) {
            csv.field("stability").field(instance).field(std::size_t{0}).field(std::size_t{0})
                .field(i).field(spec.values[i]).field(det.sigma[i])
                .field(std::abs(det.sigma[i] - spec.values[i])).field("det");
            csv.end_row();
        }
        for (std::size_t rerun = 0; rerun < config.reruns; ++rerun)
            for (std::size_t q : config.qs) {
                const SvdResult rr = rrsvd_fixed_rank(
                    inst.matrix,
                    {config.k, config.p, q, mix_seed(config.seed, 100 + 17 * rerun + q)});
                for (std::size_t i = 0; i < config.k; ++i) {
                    csv.field("stability").field(instance).field(rerun).field(q).field(i)
                        .field(spec.values[i]).field(rr.sigma[i])
                        .field(std::abs(rr.sigma[i] - spec.values[i])).field("rrsvd");
                    csv.end_row();
                }
            }
    }
    return kExitOk;
}

int run_tebd(const TebdRunConfig& config) {
    using namespace rrsvd::tebd;
    set_blas_threads(config.threads);
    if (config.out.empty()) {
        std::cerr << "tebd-run: --out required\n";
        return kExitUsage;
    }

    std::vector<std::size_t> site_dims;
    std::vector<HamiltonianTerm> terms;
    std::vector<DenseMatrix> observables;  // one per site
    std::vector<std::vector<cplx>> locals;

    if (config.model == "ising" || config.model == "heisenberg") {
        if (config.sites < 2) {
            std::cerr << "tebd-run: need at least two sites\n";
            return kExitUsage;
        }
        site_dims.assign(config.sites, 2);
        terms = config.model == "ising"
                    ? ising_terms(config.sites, config.coupling, config.field)
                    : heisenberg_terms(config.sites, config.coupling);
        for (std::size_t s = 0; s < config.sites; ++s) {
            observables.push_back(pauli('z'));
            // Neel-like start for the quench.
            locals.push_back(s % 2 == 0 ? std::vector<cplx>{1.0, 0.0}
                                        : std::vector<cplx>{0.0, 1.0});
        }
        if (config.model == "ising")
            for (std::size_t s = 0; s < config.sites; ++s) locals[s] = {1.0, 0.0};
    } else if (config.model == "tedopa-chain") {
        if (config.coeffs_file.empty()) {
            std::cerr << "tebd-run: --coeffs required for tedopa-chain\n";
            return kExitUsage;
        }
        chainmap::ChainCoefficients coeffs;
        try {
            coeffs = chainmap::read_coefficients_file(config.coeffs_file);
        } catch (const std::exception& e) {
            std::cerr << "tebd-run: " << e.what() << "\n";
            return kExitUsage;
        }
        if (config.sites >= 2 && config.sites - 1 < coeffs.omegas.size()) {
            coeffs.omegas.resize(config.sites - 1);
            coeffs.hoppings.resize(config.sites - 2);
        }
        DenseMatrix h_sys(2, 2);
        h_sys(0, 0) = 0.5 * config.sys_epsilon;
        h_sys(1, 1) = -0.5 * config.sys_epsilon;
        h_sys(0, 1) = 0.5 * config.sys_delta;
        h_sys(1, 0) = 0.5 * config.sys_delta;
        const chainmap::ChainSystem sys =
            chainmap::build_chain_terms(coeffs, config.boson_dim, h_sys, pauli('z'));
        site_dims = sys.site_dims;
        terms = sys.bond_terms;
        observables.push_back(pauli('z'));
        locals.push_back({1.0, 0.0});
        for (std::size_t s = 1; s < site_dims.size(); ++s) {
            observables.push_back(chainmap::boson_number(config.boson_dim));
            std::vector<cplx> vac(config.boson_dim, cplx(0.0));
            vac[0] = 1.0;
            locals.push_back(std::move(vac));
        }
    } else {
        std::cerr << "tebd-run: unknown model " << config.model << "\n";
        return kExitUsage;
    }

    MpsState state =
        mps_product_state(site_dims, locals, config.chi, config.trunc_tolerance);
    DecimationBackend backend;
    if (config.backend == "rrsvd") {
        backend.kind = DecimationBackend::Kind::Randomized;
        backend.target_rank = config.chi;
        backend.oversampling = config.oversampling;
        backend.power_iterations = config.q;
        backend.det_crossover = config.det_crossover;
        backend.seed = config.seed;
        if (config.epsilon > 0.0) {
            backend.accuracy_check = true;
            backend.epsilon = config.epsilon;
        }
    } else if (config.backend != "det") {
        std::cerr << "tebd-run: unknown backend " << config.backend << "\n";
        return kExitUsage;
    }

    CsvWriter diag_csv(config.out, {"step", "bond", "chi", "discarded_weight", "t_theta_us",
                                    "t_gate_us", "t_svd_us", "backend"});
    std::unique_ptr<CsvWriter> obs_csv;
    if (!config.observables_out.empty())
        obs_csv = std::make_unique<CsvWriter>(
            config.observables_out,
            std::vector<std::string>{"step", "site", "value_re", "value_im"});

    const TrotterPlan plan = trotter_plan_3rd(config.dt);
    EvolveOptions options;
    options.abort_discarded_threshold = config.abort_threshold;

    auto emit_observables = [&](std::size_t step) {
        if (!obs_csv) return;
        for (std::size_t s = 0; s < site_dims.size(); ++s) {
            const cplx v = expectation_local(state, s, observables[s]);
            obs_csv->field(step).field(s).field(v.real()).field(v.imag());
            obs_csv->end_row();
        }
    };

    emit_observables(0);
    bool aborted = false;
    std::size_t abort_step = 0;
    double cumulative_kept = 1.0;
    for (std::size_t step = 0; step < config.steps && !aborted; ++step) {
        const EvolveDiagnostics diag = evolve(state, terms, plan, 1, backend, options);
        for (const auto& rec : diag.updates) {
            diag_csv.field(step).field(rec.bond).field(rec.chi).field(rec.discarded_weight)
                .field(rec.t_theta_us).field(rec.t_gate_us).field(rec.t_svd_us)
                .field(rec.randomized_path ? "rrsvd" : "det");
            diag_csv.end_row();
        }
        cumulative_kept *= diag.kept_fraction;
        if (diag.aborted || 1.0 - cumulative_kept > config.abort_threshold) {
            aborted = true;
            abort_step = step;
        }
        emit_observables(step + 1);
    }

    if (!config.state_out.empty()) write_mps_file(config.state_out, state);
    if (aborted) {
        std::cerr << "tebd-run: discarded-weight budget exceeded at step " << abort_step
                  << "\n";
        return kExitAbort;
    }
    return kExitOk;
}

int run_chainmap(const ChainmapConfig& config) {
    if (config.measure_file.empty() || config.out.empty() || config.n_chain == 0) {
        std::cerr << "chainmap: --measure, --n-chain and --out are required\n";
        return kExitUsage;
    }
    try {
        const chainmap::MeasureGrid measure = chainmap::read_measure_file(config.measure_file);
        const chainmap::ChainCoefficients coeffs =
            chainmap::stieltjes_coefficients(measure, config.n_chain);
        chainmap::write_coefficients_file(config.out, coeffs);
    } catch (const recurrence_breakdown& e) {
        std::cerr << "chainmap: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const contract_violation& e) {
        std::cerr << "chainmap: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "chainmap: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}

namespace {
constexpr char kMpsMagic[4] = {'R', 'R', 'M', 'P'};
}

void write_mps_file(const std::string& path, const tebd::MpsState& state) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open state file for writing: " + path);
    f.write(kMpsMagic, 4);
    const std::uint32_t version = 1;
    f.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t n = state.n_sites();
    f.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t dims[3] = {state.gammas[k].dim_left, state.gammas[k].dim_phys,
                                       state.gammas[k].dim_right};
        f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
        f.write(reinterpret_cast<const char*>(state.gammas[k].values.data()),
                static_cast<std::streamsize>(state.gammas[k].values.size() * sizeof(cplx)));
    }
    for (std::size_t b = 0; b + 1 < n; ++b) {
        const std::uint64_t chi = state.lambdas[b].size();
        f.write(reinterpret_cast<const char*>(&chi), sizeof(chi));
        f.write(reinterpret_cast<const char*>(state.lambdas[b].data()),
                static_cast<std::streamsize>(chi * sizeof(double)));
    }
    if (!f) throw std::runtime_error("state write failed: " + path);
}

tebd::MpsState read_mps_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open state file: " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), sizeof(version));
    f.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!f || std::memcmp(magic, kMpsMagic, 4) != 0 || version != 1)
        throw std::runtime_error("bad state file: " + path);
    tebd::MpsState state;
    for (std::uint64_t k = 0; k < n; ++k) {
        std::uint64_t dims[3];
        f.read(reinterpret_cast<char*>(dims), sizeof(dims));
        tebd::Tensor3 g(dims[0], dims[1], dims[2]);
        f.read(reinterpret_cast<char*>(g.values.data()),
               static_cast<std::streamsize>(g.values.size() * sizeof(cplx)));
        state.site_dims.push_back(dims[1]);
        state.gammas.push_back(std::move(g));
    }
    for (std::uint64_t b = 0; b + 1 < n; ++b) {
        std::uint64_t chi = 0;
        f.read(reinterpret_cast<char*>(&chi), sizeof(chi));
        std::vector<double> l(chi);
        f.read(reinterpret_cast<char*>(l.data()),
               static_cast<std::streamsize>(chi * sizeof(double)));
        state.lambdas.push_back(std::move(l));
    }
    if (!f) throw std::runtime_error("truncated state file: " + path);
    return state;
}

}  // namespace rrsvd::bench
