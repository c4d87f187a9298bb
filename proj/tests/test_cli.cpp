// Integration tests for the feedback_sim command line tool. The binary path
// is passed as the first program argument (wired up by CMake), every test
// shells out to it and inspects exit codes and emitted text.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <fbsim/analytic.hpp>
#include <fbsim/integrator.hpp>
#include <fbsim/params.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

std::string g_cli;

struct RunResult {
    int code = -1;
    std::string out;
};

// Runs the tool through the shell, capturing stdout+stderr. `prefix` lets a
// test set environment variables for the child only.
RunResult run_cli(const std::string& args, const std::string& prefix = "") {
    const std::string cmd = prefix + g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, n);
    }
    const int status = pclose(pipe);
    RunResult r;
    r.out = std::move(out);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            rows.push_back(line);
        }
    }
    return rows;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("help exits zero and lists every subcommand") {
    const auto r = run_cli("--help");
    CHECK(r.code == 0);
    for (const char* name : {"simulate", "analytic", "fig1", "fig2", "verify-ou", "adjudicate-eq13"}) {
        INFO("missing subcommand in help: " << name);
        CHECK(r.out.find(name) != std::string::npos);
    }
}

TEST_CASE("missing or unknown arguments exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("simulate --no-such-flag").code == 2);
}

TEST_CASE("parameter validation failures exit with code 2") {
    CHECK(run_cli("simulate --gamma-tau -1").code == 2);
    CHECK(run_cli("simulate --Gamma-tau -0.5").code == 2);
    CHECK(run_cli("simulate --dt-divisor 0").code == 2);
    CHECK(run_cli("fig1 --paths 0 --dt-divisor 100").code == 2);
    CHECK(run_cli("verify-ou --lags 0").code == 2);
    // figure commands refuse a grid too coarse to resolve the window
    const auto r = run_cli("fig1 --dt-divisor 50 --paths 10");
    CHECK(r.code == 2);
    CHECK(r.out.find("dt_divisor") != std::string::npos);
}

TEST_CASE("config file parsing") {
    SUBCASE("unknown key is rejected") {
        TempFile cfg("cli_cfg_unknown.json");
        std::ofstream(cfg.path) << R"({"n_paths": 50, "n_pths": 2})";
        const auto r = run_cli("fig1 --config " + cfg.path);
        CHECK(r.code == 2);
        CHECK(r.out.find("n_pths") != std::string::npos);
    }
    SUBCASE("malformed json is rejected") {
        TempFile cfg("cli_cfg_malformed.json");
        std::ofstream(cfg.path) << R"({"n_paths": )";
        CHECK(run_cli("fig1 --config " + cfg.path).code == 2);
    }
    SUBCASE("missing file is rejected") {
        CHECK(run_cli("fig1 --config no_such_file.json").code == 2);
    }
    SUBCASE("config applies and explicit flags win over it") {
        TempFile cfg("cli_cfg_ok.json");
        std::ofstream(cfg.path) << R"({"n_paths": 77, "master_seed": 9,
                                       "dt_divisor": 100, "gamma_tau": 0.0})";
        const auto base = run_cli("fig1 --config " + cfg.path + " --no-timestamp");
        CHECK(base.code == 0);
        CHECK(base.out.find("# n_paths = 77") != std::string::npos);
        CHECK(base.out.find("# master_seed = 9") != std::string::npos);
        const auto over = run_cli("fig1 --config " + cfg.path + " --paths 33 --no-timestamp");
        CHECK(over.code == 0);
        CHECK(over.out.find("# n_paths = 33") != std::string::npos);
    }
}

TEST_CASE("FEEDBACK_SIM_WORKERS environment variable") {
    const std::string args = "fig1 --paths 40 --dt-divisor 100 --gamma-tau 0 --no-timestamp";
    SUBCASE("a malformed value is an error when no flag is given") {
        const auto r = run_cli(args, "FEEDBACK_SIM_WORKERS=banana ");
        CHECK(r.code == 2);
        CHECK(r.out.find("FEEDBACK_SIM_WORKERS") != std::string::npos);
    }
    SUBCASE("an explicit --workers flag wins over a malformed env value") {
        const auto r = run_cli(args + " --workers 1", "FEEDBACK_SIM_WORKERS=banana ");
        CHECK(r.code == 0);
    }
    SUBCASE("a valid env value is accepted") {
        const auto r = run_cli(args, "FEEDBACK_SIM_WORKERS=2 ");
        CHECK(r.code == 0);
    }
}

TEST_CASE("simulate emits a trajectory that matches the library bit for bit") {
    const auto r = run_cli("simulate --gamma-tau 0 --dt-divisor 20 --no-timestamp");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# command = simulate") != std::string::npos);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 62); // header row + 61 samples on [0, 3tau] at dt = tau/20
    CHECK(rows[0] == "step_index,time,re_amplitude,im_amplitude,population");

    const fbsim::SystemParams p(0.5, 1.0, 3.3, 0.0);
    const auto traj = fbsim::integrate(p, nullptr, 1.0 / 20, 3.0);
    for (std::size_t k : {std::size_t{0}, std::size_t{10}, std::size_t{35}, std::size_t{60}}) {
        const auto f = split_csv(rows[k + 1]);
        REQUIRE(f.size() == 5);
        CHECK(std::stoul(f[0]) == k);
        // %.17g round-trips doubles exactly
        CHECK(std::stod(f[2]) == traj.values[k].real());
        CHECK(std::stod(f[3]) == traj.values[k].imag());
        CHECK(std::stod(f[4]) == std::norm(traj.values[k]));
    }
}

TEST_CASE("analytic reference table has the documented window structure") {
    const auto r = run_cli("analytic --dt-divisor 10 --no-timestamp");
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 32); // header + 31 samples
    CHECK(rows[0] == "t_over_tau,ww,feedback_no_noise,pop_2tau_paper,pop_2tau_with_cross,pop_3tau");

    const auto at0 = split_csv(rows[1]);
    CHECK(std::stod(at0[1]) == 1.0);
    CHECK(std::stod(at0[2]) == 1.0);
    CHECK(at0[3] == "nan"); // two-interval closed forms only exist on [tau, 2tau]
    CHECK(at0[5] == "nan"); // quadrature column is opt-in (--three-tau-steps)

    const auto mid = split_csv(rows[16]); // t = 1.5 tau, inside the window
    const fbsim::SystemParams p(0.5, 1.0, 3.3, 2.0);
    CHECK(std::stod(mid[3]) == doctest::Approx(fbsim::population_2tau_paper(1.5, p)).epsilon(1e-15));
    CHECK(std::stod(mid[4]) == doctest::Approx(fbsim::population_2tau_with_cross(1.5, p)).epsilon(1e-15));

    const auto late = split_csv(rows[26]); // t = 2.5 tau, beyond the window
    CHECK(late[3] == "nan");
    CHECK(late[4] == "nan");
}

TEST_CASE("analytic fills the full-horizon column at the requested sample points") {
    // gamma = 0 keeps the closed-form branch, so sampling stays cheap
    const auto r = run_cli("analytic --dt-divisor 10 --gamma-tau 0 --three-tau-steps 3 --no-timestamp");
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 32);
    const fbsim::SystemParams p(0.5, 1.0, 3.3, 0.0);
    for (std::size_t k = 0; k <= 30; ++k) {
        const auto f = split_csv(rows[k + 1]);
        if (k % 10 == 0) {
            CHECK(std::stod(f[5]) ==
                  doctest::Approx(fbsim::population_3tau(k / 10.0, p)).epsilon(1e-15));
        } else {
            CHECK(f[5] == "nan");
        }
    }
}

TEST_CASE("fig1 output is byte-identical across worker counts and seeds reproduce") {
    TempFile a("cli_fig1_a.csv"), b("cli_fig1_b.csv"), c("cli_fig1_c.csv");
    const std::string common = "fig1 --paths 96 --dt-divisor 100 --no-timestamp --seed 11 ";
    REQUIRE(run_cli(common + "--workers 1 --out " + a.path).code == 0);
    REQUIRE(run_cli(common + "--workers 2 --out " + b.path).code == 0);
    REQUIRE(run_cli("fig1 --paths 96 --dt-divisor 100 --no-timestamp --seed 12 --out " + c.path).code == 0);
    const std::string bytes_a = slurp(a.path);
    CHECK(bytes_a == slurp(b.path));
    CHECK(bytes_a != slurp(c.path));
    CHECK(bytes_a.find("feedback_noise_mean") != std::string::npos);
}

TEST_CASE("fig2 differences vanish without energy noise") {
    const auto r = run_cli("fig2 --gamma-tau 0 --paths 2 --dt-divisor 200 "
                           "--phase-steps 4 --time-steps 5 --no-timestamp");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("sign_convention") != std::string::npos);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 1 + 4 * 5);
    CHECK(rows[0] == "phi,t_over_tau,difference");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split_csv(rows[i]);
        REQUIRE(f.size() == 3);
        // without noise the Monte Carlo mean equals the analytic curve up to
        // integrator discretisation error
        CHECK(std::fabs(std::stod(f[2])) < 1e-4);
    }
}

TEST_CASE("verify-ou without noise passes trivially with exact autocovariance") {
    const auto r = run_cli("verify-ou --gamma-tau 0 --paths 24 --dt-divisor 50 --lags 6 --no-timestamp");
    CHECK(r.code == 0);
    CHECK(r.out.find("# verdict = PASS") != std::string::npos);
    // both report columns carry the feedback kernel amplitude, and without
    // noise the measured curve equals the prediction at every lag
    const fbsim::SystemParams p(0.5, 1.0, 3.3, 0.0);
    const double amp = fbsim::ou_kernel(0.0, p);
    for (const auto& row : data_lines(r.out)) {
        const auto f = split_csv(row);
        if (f[0] == "lag_over_tau") continue;
        REQUIRE(f.size() == 8);
        CHECK(std::stod(f[4]) == doctest::Approx(amp).epsilon(1e-12));            // scaled_re
        CHECK(std::stod(f[4]) == doctest::Approx(std::stod(f[5])).epsilon(1e-12)); // == expected
        CHECK(std::stod(f[6]) == 0.0);                                             // z score
    }
}

TEST_CASE("verify-ou with noise passes and reports both lag regimes") {
    const auto r = run_cli("verify-ou --paths 3000 --dt-divisor 250 --no-timestamp --seed 42");
    CHECK(r.code == 0);
    CHECK(r.out.find("# verdict = PASS") != std::string::npos);
    CHECK(r.out.find("within_tau") != std::string::npos);
    CHECK(r.out.find("beyond_tau") != std::string::npos);
    CHECK(r.out.find("# max_abs_z_within_tau") != std::string::npos);
}

TEST_CASE("adjudicate-eq13 produces a scored report") {
    const auto r = run_cli("adjudicate-eq13 --paths 2000 --dt-divisor 250 --no-timestamp");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# phi = 6.28") != std::string::npos); // defaults to a 2 pi winding
    CHECK(r.out.find("# frac_within_3sigma_paper") != std::string::npos);
    CHECK(r.out.find("# frac_within_3sigma_with_cross") != std::string::npos);
    CHECK(r.out.find("# winner = ") != std::string::npos);
}

TEST_CASE("quadrature convergence failure exits with code 3") {
    // an extreme damping rate overflows the two-time integrand before the
    // refinement cap is reached
    const auto r = run_cli("analytic --gamma-tau 1000 --three-tau-steps 2 --dt-divisor 100");
    CHECK(r.code == 3);
    CHECK(r.out.find("convergence") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-feedback_sim> [doctest args]\n", argv[0]);
        return 1;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
