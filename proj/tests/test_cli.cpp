#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rrsvd/linalg.hpp"
#include "rrsvd/matrix_io.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_dir;

int run_cli(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " 2>" + (g_dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_CASE("matgen writes a readable matrix with a matching sidecar") {
    const std::string out = (g_dir / "m.rrsm").string();
    REQUIRE(run_cli("matgen --rows 300 --cols 200 --spectrum power --seed 7 --out " + out) == 0);
    const rrsvd::DenseMatrix a = rrsvd::read_rrsm(out);
    CHECK(a.rows() == 300);
    CHECK(a.cols() == 200);
    const std::vector<double> sidecar = rrsvd::read_value_lines(out + ".spectrum.txt");
    REQUIRE(sidecar.size() == 200);
    const std::vector<double> sigma = rrsvd::singular_values(a);
    for (std::size_t i = 0; i < 200; ++i)
        CHECK(std::abs(sigma[i] - sidecar[i]) <= 1e-9 * sidecar[0]);
}

TEST_CASE("matgen rejects a bad exponential ratio with exit 2") {
    const std::string out = (g_dir / "bad.rrsm").string();
    CHECK(run_cli("matgen --rows 10 --cols 5 --spectrum exp:1.5 --seed 1 --out " + out) == 2);
}

TEST_CASE("svd-bench emits trial and summary rows, errors reproducible") {
    const std::string out = (g_dir / "bench.csv").string();
    const std::string flags =
        " --sizes 160 --k 16 --p 16 --qs 0,2 --trials 2 --threads 1 --seed 5 --out ";
    REQUIRE(run_cli("svd-bench" + flags + out) == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() > 1);
    const auto header = rows[0];
    const std::size_t rec = column_index(header, "record");
    const std::size_t algo = column_index(header, "algo");
    const std::size_t err = column_index(header, "max_abs_sv_error");
    const std::size_t speedup = column_index(header, "speedup");
    std::size_t n_det = 0, n_rr = 0, n_summary = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][algo] == "det") ++n_det;
        if (rows[i][algo] == "rrsvd") ++n_rr;
        if (rows[i][rec] == "summary") {
            ++n_summary;
            CHECK(std::stod(rows[i][speedup]) > 0.0);
        }
    }
    CHECK(n_det == 2);
    CHECK(n_rr == 4);
    CHECK(n_summary == 2);

    // Error columns are seed-determined; a rerun reproduces them bit-exactly.
    const std::string out2 = (g_dir / "bench2.csv").string();
    REQUIRE(run_cli("svd-bench" + flags + out2) == 0);
    auto rows2 = read_csv(out2);
    REQUIRE(rows2.size() == rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][err] == rows2[i][err]);
}

TEST_CASE("stability on the zero spectrum reports zero errors") {
    const std::string spectrum = (g_dir / "zeros.txt").string();
    {
        std::ofstream f(spectrum);
        for (int i = 0; i < 60; ++i) f << "0.0\n";
    }
    const std::string out = (g_dir / "stability.csv").string();
    REQUIRE(run_cli("stability --rows 80 --cols 60 --k 8 --p 8 --qs 2 --reruns 2 "
                    "--spectrum file:" +
                    spectrum + " --threads 1 --seed 3 --out " + out) == 0);
    auto rows = read_csv(out);
    const std::size_t err = column_index(rows[0], "abs_error");
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][err]) == 0.0);
}

TEST_CASE("tebd-run: deterministic and randomized traces agree") {
    const std::string obs_det = (g_dir / "obs_det.csv").string();
    const std::string obs_rr = (g_dir / "obs_rr.csv").string();
    const std::string base =
        "tebd-run --model ising --sites 6 --chi 16 --dt 0.01 --steps 20 --threads 1 "
        "--trunc-tolerance 1e-24 ";
    REQUIRE(run_cli(base + "--backend det --out " + (g_dir / "d1.csv").string() +
                    " --observables-out " + obs_det) == 0);
    REQUIRE(run_cli(base + "--backend rrsvd --crossover 0 --seed 9 --out " +
                    (g_dir / "d2.csv").string() + " --observables-out " + obs_rr) == 0);
    auto a = read_csv(obs_det);
    auto b = read_csv(obs_rr);
    REQUIRE(a.size() == b.size());
    const std::size_t re = column_index(a[0], "value_re");
    for (std::size_t i = 1; i < a.size(); ++i)
        CHECK(std::abs(std::stod(a[i][re]) - std::stod(b[i][re])) <= 1e-6);
}

TEST_CASE("tebd-run: zero Hamiltonian emits timings and zero discarded weight") {
    const std::string out = (g_dir / "zero.csv").string();
    REQUIRE(run_cli("tebd-run --model ising --coupling 0 --field 0 --sites 4 --chi 8 "
                    "--dt 0.1 --steps 3 --threads 1 --out " +
                    out) == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() > 1);
    const std::size_t w = column_index(rows[0], "discarded_weight");
    const std::size_t t = column_index(rows[0], "t_svd_us");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][w]) == 0.0);
        CHECK(std::stod(rows[i][t]) > 0.0);
    }
}

TEST_CASE("tebd-run: abort threshold exits with code 3") {
    CHECK(run_cli("tebd-run --model heisenberg --sites 6 --chi 2 --dt 0.1 --steps 40 "
                  "--abort-threshold 1e-9 --threads 1 --out " +
                  (g_dir / "abort.csv").string()) == 3);
}

TEST_CASE("chainmap CLI round trip feeds tebd-run") {
    // Uniform measure on [-1, 1].
    const std::string measure = (g_dir / "uniform.txt").string();
    {
        std::ofstream f(measure);
        const std::size_t n = 20001;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            const double w = (i == 0 || i + 1 == n) ? 1.0 / static_cast<double>(n - 1)
                                                    : 2.0 / static_cast<double>(n - 1);
            f << x << " " << w << "\n";
        }
    }
    const std::string coeffs = (g_dir / "coeffs.txt").string();
    REQUIRE(run_cli("chainmap --measure " + measure + " --n-chain 8 --out " + coeffs) == 0);

    // Legendre-type measure: on-site frequencies vanish.
    std::ifstream f(coeffs);
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::size_t n;
        double omega, t;
        ss >> n >> omega >> t;
        CHECK(std::abs(omega) <= 1e-8);
        CHECK(t > 0.0);
    }

    REQUIRE(run_cli("tebd-run --model tedopa-chain --coeffs " + coeffs +
                    " --chi 8 --boson-dim 3 --dt 0.02 --steps 5 --threads 1 --out " +
                    (g_dir / "tedopa.csv").string() + " --observables-out " +
                    (g_dir / "tedopa_obs.csv").string()) == 0);
    CHECK(read_csv((g_dir / "tedopa_obs.csv").string()).size() > 1);
}

TEST_CASE("chainmap rejects n-chain beyond the node count with exit 2") {
    const std::string measure = (g_dir / "small.txt").string();
    {
        std::ofstream f(measure);
        f << "0.0 0.5\n0.5 1.0\n1.0 0.5\n";
    }
    CHECK(run_cli("chainmap --measure " + measure + " --n-chain 9 --out " +
                  (g_dir / "c2.txt").string()) == 2);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-rrsvd-cli>\n", argv[0]);
        return 2;
    }
    g_binary = argv[1];
    g_dir = fs::temp_directory_path() / "rrsvd_cli_test";
    fs::create_directories(g_dir);
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    const int rc = ctx.run();
    fs::remove_all(g_dir);
    return rc;
}
