#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "experiments.hpp"
#include "rrsvd/errors.hpp"

using namespace rrsvd::bench;

int main(int argc, char** argv) {
    CLI::App app{"Randomized reduced-rank SVD toolkit: matrix generation, accuracy and "
                 "speed-up experiments, TEBD runs, and chain mapping"};
    app.require_subcommand(1);

    MatgenConfig matgen;
    auto* cmd_matgen = app.add_subcommand("matgen", "Write a structured test matrix (RRSM v1)");
    cmd_matgen->add_option("--rows", matgen.rows)->required();
    cmd_matgen->add_option("--cols", matgen.cols)->required();
    cmd_matgen->add_option("--spectrum", matgen.spectrum,
                           "exp:RATIO | power | file:PATH (default power)");
    cmd_matgen->add_option("--seed", matgen.seed);
    cmd_matgen->add_option("--out", matgen.out)->required();

    SvdBenchConfig svdb;
    svdb.sizes = {900, 1600, 2500, 3600, 4900};
    auto* cmd_svdb = app.add_subcommand("svd-bench", "Deterministic vs randomized SVD timings");
    cmd_svdb->add_option("--sizes", svdb.sizes, "square sizes (default 900..4900)")->delimiter(',');
    cmd_svdb->add_option("--rows", svdb.rows, "rectangular size instead of --sizes");
    cmd_svdb->add_option("--cols", svdb.cols);
    cmd_svdb->add_option("--k", svdb.k);
    cmd_svdb->add_option("--p", svdb.p);
    cmd_svdb->add_option("--qs", svdb.qs, "power-iteration counts (default 2)")->delimiter(',');
    cmd_svdb->add_option("--trials", svdb.trials);
    cmd_svdb->add_option("--spectrum", svdb.spectrum);
    cmd_svdb->add_option("--seed", svdb.seed);
    cmd_svdb->add_option("--threads", svdb.threads);
    cmd_svdb->add_option("--out", svdb.out)->required();

    StabilityConfig stab;
    auto* cmd_stab = app.add_subcommand("stability", "Per-singular-value error study");
    cmd_stab->add_option("--rows", stab.rows);
    cmd_stab->add_option("--cols", stab.cols);
    cmd_stab->add_option("--k", stab.k);
    cmd_stab->add_option("--p", stab.p);
    cmd_stab->add_option("--qs", stab.qs)->delimiter(',');
    cmd_stab->add_option("--instances", stab.instances);
    cmd_stab->add_option("--reruns", stab.reruns);
    cmd_stab->add_option("--spectrum", stab.spectrum);
    cmd_stab->add_option("--seed", stab.seed);
    cmd_stab->add_option("--threads", stab.threads);
    cmd_stab->add_option("--out", stab.out)->required();

    TebdRunConfig tebd;
    auto* cmd_tebd = app.add_subcommand("tebd-run", "Time-evolve a chain and profile updates");
    cmd_tebd->add_option("--model", tebd.model, "ising | heisenberg | tedopa-chain");
    cmd_tebd->add_option("--coeffs", tebd.coeffs_file, "chain coefficients file");
    cmd_tebd->add_option("--sites", tebd.sites);
    cmd_tebd->add_option("--chi", tebd.chi);
    cmd_tebd->add_option("--dt", tebd.dt);
    cmd_tebd->add_option("--steps", tebd.steps);
    cmd_tebd->add_option("--backend", tebd.backend, "det | rrsvd");
    cmd_tebd->add_option("--epsilon", tebd.epsilon, "enable the accuracy check when > 0");
    cmd_tebd->add_option("--q", tebd.q);
    cmd_tebd->add_option("--oversampling", tebd.oversampling);
    cmd_tebd->add_option("--crossover", tebd.det_crossover,
                         "minor dimension below which the deterministic path is used");
    cmd_tebd->add_option("--coupling", tebd.coupling);
    cmd_tebd->add_option("--field", tebd.field);
    cmd_tebd->add_option("--trunc-tolerance", tebd.trunc_tolerance);
    cmd_tebd->add_option("--abort-threshold", tebd.abort_threshold);
    cmd_tebd->add_option("--boson-dim", tebd.boson_dim);
    cmd_tebd->add_option("--sys-epsilon", tebd.sys_epsilon);
    cmd_tebd->add_option("--sys-delta", tebd.sys_delta);
    cmd_tebd->add_option("--seed", tebd.seed);
    cmd_tebd->add_option("--threads", tebd.threads);
    cmd_tebd->add_option("--out", tebd.out)->required();
    cmd_tebd->add_option("--observables-out", tebd.observables_out);
    cmd_tebd->add_option("--state-out", tebd.state_out);

    ChainmapConfig chain;
    auto* cmd_chain = app.add_subcommand("chainmap", "Measure file to chain coefficients");
    cmd_chain->add_option("--measure", chain.measure_file)->required();
    cmd_chain->add_option("--n-chain", chain.n_chain)->required();
    cmd_chain->add_option("--out", chain.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_matgen->parsed()) return run_matgen(matgen);
        if (cmd_svdb->parsed()) return run_svd_bench(svdb);
        if (cmd_stab->parsed()) return run_stability(stab);
        if (cmd_tebd->parsed()) return run_tebd(tebd);
        if (cmd_chain->parsed()) return run_chainmap(chain);
    } catch (const rrsvd::recurrence_breakdown& e) {
        std::cerr << argv[0] << ": " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const rrsvd::contract_violation& e) {
        std::cerr << argv[0] << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << argv[0] << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
