#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fbsim/errors.hpp"
#include "fbsim/gaussian_moments.hpp"
#include "fbsim/kernels/kernels.hpp"
#include "fbsim/noise_path.hpp"
#include "fbsim/params.hpp"

using namespace fbsim;

namespace {

// closed form for the double integral of e^{-gamma min(|u-v|, tau)} over
// [tau,t]^2, derived by reducing to the difference variable
double nnstar_closed(double t, double tau, double gamma) {
    double L = t - tau;
    if (gamma == 0.0) return L * L;
    double g = gamma;
    if (L <= tau)
        return 2.0 * (L / g - (1.0 - std::exp(-g * L)) / (g * g));
    double e = std::exp(-g * tau);
    return 2.0 * (L * (1.0 - e) / g - (1.0 - (1.0 + g * tau) * e) / (g * g) +
                  e * (L - tau) * (L - tau) / 2.0);
}

struct MCMoment {
    double mean, se;
};

struct MCMoments {
    MCMoment N, NN, M, NM, MM;      // real parts
    double N_im, M_im, NM_im;       // imaginary means (consistency check)
};

// per-path trapezoid evaluation of the nested phase-factor integrals
MCMoments mc_moments(double t, double tau, double gamma, std::size_t K,
                     std::size_t n_paths, std::uint64_t master) {
    const double dt = tau / double(K);
    const std::size_t n = std::size_t(std::llround(t / dt));
    const std::size_t d = K;
    std::vector<double> theta(n - d + 1), sn(theta.size()), cs(theta.size());
    std::vector<std::complex<double>> z(n + 1), G(n + 1);

    std::vector<double> sN, sNN, sM, sNM, sMM, sNi, sMi, sNMi;
    for (std::size_t pidx = 0; pidx < n_paths; ++pidx) {
        auto path = generate_path(kernels::path_key(master, pidx), n, dt, gamma);
        for (std::size_t j = d; j <= n; ++j)
            theta[j - d] = path.cumulative[j] - path.cumulative[j - d];
        kernels::vsincos(theta.data(), sn.data(), cs.data(), theta.size());
        for (std::size_t j = d; j <= n; ++j)
            z[j] = {cs[j - d], -sn[j - d]}; // e^{-i theta_j}

        std::complex<double> N{0.0, 0.0};
        for (std::size_t j = d; j <= n; ++j) {
            double w = (j == d || j == n) ? 0.5 * dt : dt;
            N += w * z[j];
        }
        // prefix integral G(s) = int_tau^s e^{-i theta}, s = j*dt
        G[d] = 0.0;
        for (std::size_t j = d + 1; j + d <= n; ++j)
            G[j] = G[j - 1] + 0.5 * dt * (z[j - 1] + z[j]);
        std::complex<double> M{0.0, 0.0};
        if (n >= 2 * d) {
            for (std::size_t j = 2 * d; j <= n; ++j) {
                double w = (j == 2 * d || j == n) ? 0.5 * dt : dt;
                M += w * z[j] * G[j - d];
            }
        }
        sN.push_back(N.real());
        sNi.push_back(N.imag());
        sNN.push_back(std::norm(N));
        sM.push_back(M.real());
        sMi.push_back(M.imag());
        auto nm = std::conj(N) * M;
        sNM.push_back(nm.real());
        sNMi.push_back(nm.imag());
        sMM.push_back(std::norm(M));
    }

    auto stats = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= double(v.size());
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return MCMoment{m, std::sqrt(ss / (double(v.size()) * double(v.size() - 1)))};
    };
    MCMoments r;
    r.N = stats(sN);
    r.NN = stats(sNN);
    r.M = stats(sM);
    r.NM = stats(sNM);
    r.MM = stats(sMM);
    r.N_im = stats(sNi).mean;
    r.M_im = stats(sMi).mean;
    r.NM_im = stats(sNMi).mean;
    return r;
}

bool close_combined(double quad, const MCMoment& mc, double tol) {
    double combined = std::sqrt(mc.se * mc.se + tol * quad * tol * quad);
    return std::abs(quad - mc.mean) <= 3.0 * combined;
}

} // namespace

TEST_CASE("segment_overlap geometry") {
    CHECK(segment_overlap({0, 1, +1}, {2, 3, +1}) == 0.0);
    CHECK(segment_overlap({0, 2, +1}, {1, 3, -1}) == 1.0);
    CHECK(segment_overlap({0, 1, +1}, {0, 1, +1}) == 1.0);
    CHECK(segment_overlap({0, 1, +1}, {0.5, 10, +1}) == 0.5);
    // symmetry and bound by the shorter segment
    Segment s1{0.3, 2.7, +1}, s2{1.1, 1.9, -1};
    CHECK(segment_overlap(s1, s2) == segment_overlap(s2, s1));
    CHECK(segment_overlap(s1, s2) <= (s2.b - s2.a));
}

TEST_CASE("phase_moment: Gaussian characteristic function") {
    const double tau = 1.0, gamma = 2.0;
    // single window of length tau: Var = gamma*tau
    double single = phase_moment({{3.0, 3.0 + tau, +1}}, gamma);
    CHECK(single == doctest::Approx(std::exp(-gamma * tau / 2)).epsilon(1e-14));
    // exact cancellation
    CHECK(phase_moment({{0, tau, +1}, {0, tau, -1}}, gamma) == 1.0);
    // shifted opposite-sign windows: Var = 2 gamma Delta
    double delta = 0.4;
    double two = phase_moment({{0, tau, +1}, {delta, tau + delta, -1}}, gamma);
    CHECK(two == doctest::Approx(std::exp(-gamma * delta)).epsilon(1e-14));
    // permutation and global sign flip invariance
    std::vector<Segment> segs = {{0, 1, +1}, {0.5, 2, -1}, {1.2, 1.7, +1}};
    std::vector<Segment> perm = {segs[2], segs[0], segs[1]};
    std::vector<Segment> flip = {{0, 1, -1}, {0.5, 2, +1}, {1.2, 1.7, -1}};
    CHECK(phase_moment(segs, gamma) == phase_moment(perm, gamma));
    CHECK(phase_moment(segs, gamma) == phase_moment(flip, gamma));
    // range (0, 1]
    CHECK(phase_moment(segs, gamma) > 0.0);
    CHECK(phase_moment(segs, gamma) <= 1.0);
    CHECK(phase_moment(segs, 0.0) == 1.0);
    CHECK_THROWS_AS(phase_moment(segs, -1.0), invalid_parameter);
    CHECK_THROWS_AS(phase_moment({{1.0, 0.0, +1}}, gamma), invalid_parameter);
    CHECK_THROWS_AS(phase_moment({{0.0, 1.0, 2}}, gamma), invalid_parameter);
}

TEST_CASE("mean_N closed form") {
    auto p = SystemParams::from_dimensionless(0.5, 1.0, 0.0); // gamma*tau = 1
    CHECK(mean_N(2.0, p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(mean_N(1.0, p) == 0.0);
    auto p0 = SystemParams::from_dimensionless(0.5, 0.0, 0.0);
    CHECK(mean_N(2.6, p0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK_THROWS_AS(mean_N(0.99, p), invalid_parameter);
}

TEST_CASE("moment_M exact forms") {
    auto p = SystemParams::from_dimensionless(0.5, 1.5, 0.0);
    const double g = p.gamma, tau = p.tau;
    // disjoint inner/outer windows make the averaged integrand constant
    CHECK(moment_M(3.0, p) ==
          doctest::Approx(std::exp(-g * tau) * 0.5).epsilon(2e-4));
    CHECK(moment_M(2.0, p) == 0.0);
    CHECK(moment_M(1.2, p) == 0.0);
    auto p0 = SystemParams::from_dimensionless(0.5, 0.0, 0.0);
    CHECK(moment_M(3.0, p0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(moment_M(2.5, p0) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("moment_NNstar against the difference-variable closed form") {
    for (double gt : {0.5, 1.0, 2.0}) {
        auto p = SystemParams::from_dimensionless(0.5, gt, 0.0);
        for (double t : {1.5, 2.0, 2.5, 3.0}) {
            double quad = moment_NNstar(t, p);
            double ref = nnstar_closed(t, p.tau, p.gamma);
            CHECK(quad == doctest::Approx(ref).epsilon(3e-4));
        }
    }
    auto p0 = SystemParams::from_dimensionless(0.5, 0.0, 0.0);
    CHECK(moment_NNstar(3.0, p0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(moment_NNstar(1.0, p0) == 0.0);
    CHECK(moment_NNstar(0.5, p0) == 0.0);
}

TEST_CASE("gamma=0 volumes for the 3-D and 4-D moments") {
    auto p0 = SystemParams::from_dimensionless(0.5, 0.0, 1.0);
    CHECK(moment_NstarM(3.0, p0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(moment_MMstar(3.0, p0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(moment_NstarM(2.0, p0) == 0.0);
    CHECK(moment_MMstar(1.7, p0) == 0.0);
}

TEST_CASE("Cauchy-Schwarz ordering of quadratic moments") {
    auto p = SystemParams::from_dimensionless(0.5, 1.0, 0.0);
    double t = 3.0;
    CHECK(moment_NNstar(t, p) >= mean_N(t, p) * mean_N(t, p));
    CHECK(moment_MMstar(t, p) >= moment_M(t, p) * moment_M(t, p));
}

TEST_CASE("all five moments vs per-path Monte Carlo at t=3tau, gamma*tau=1") {
    const double tau = 1.0, gamma = 1.0, t = 3.0, tol = 1e-4;
    auto p = SystemParams::from_dimensionless(0.5, gamma * tau, 0.0, tau);
    auto mc = mc_moments(t, tau, gamma, 200, 20000, 90210);

    // oracle sanity: imaginary parts consistent with real-valued expectations
    CHECK(std::abs(mc.N_im) <= 5.0 * mc.N.se);
    CHECK(std::abs(mc.M_im) <= 5.0 * mc.M.se);

    double qN = mean_N(t, p);
    double qNN = moment_NNstar(t, p);
    double qM = moment_M(t, p);
    double qNM = moment_NstarM(t, p);
    double qMM = moment_MMstar(t, p);

    // exact expectation of the N estimator: trapezoid weights sum to t-tau
    CHECK(qN == doctest::Approx((t - tau) * std::exp(-gamma * tau / 2)).epsilon(1e-14));

    CHECK(close_combined(qN, mc.N, tol));
    CHECK(close_combined(qNN, mc.NN, tol));
    CHECK(close_combined(qM, mc.M, tol));
    CHECK(close_combined(qNM, mc.NM, tol));
    CHECK(close_combined(qMM, mc.MM, tol));
}

TEST_CASE("refinement cap raises quadrature_failure with a residual") {
    auto p = SystemParams::from_dimensionless(0.5, 2.0, 0.0);
    QuadratureControl ctl;
    ctl.rel_tol = 1e-15; // unreachable for a kinked integrand
    ctl.base_nodes_12d = 32;
    ctl.max_nodes_12d = 64;
    try {
        moment_NNstar(3.0, p, ctl);
        FAIL("expected quadrature_failure");
    } catch (const quadrature_failure& e) {
        CHECK(e.residual > 0.0);
    }
}
