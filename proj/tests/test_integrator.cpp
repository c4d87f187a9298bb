#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fbsim/analytic.hpp"
#include "fbsim/csv.hpp"
#include "fbsim/errors.hpp"
#include "fbsim/integrator.hpp"
#include "fbsim/noise_path.hpp"

using namespace fbsim;

TEST_CASE("zero decay without noise keeps the amplitude constant") {
    auto p = SystemParams(0.0, 1.0, 3.3, 0.0);
    auto traj = integrate(p, nullptr, 1.0 / 64, 3.0, {0.5, -0.25});
    REQUIRE(traj.values.size() == 193);
    for (auto v : traj.values) {
        CHECK(v.real() == 0.5);
        CHECK(v.imag() == -0.25);
    }
}

TEST_CASE("deterministic run matches the delay series") {
    auto p = SystemParams::from_dimensionless(0.5, 0.0, 3.3);
    const double dt = p.tau / 2000;
    auto traj = integrate(p, nullptr, dt, 3.0 * p.tau);
    REQUIRE(traj.values.size() == 6001);
    CHECK(traj.dt == dt);
    CHECK(traj.values[0] == std::complex<double>(1.0, 0.0));

    double max_rel = 0.0;
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
        auto ref = series_amplitude_no_noise(k * dt, p);
        max_rel = std::max(max_rel, std::abs(traj.values[k] - ref) / std::abs(ref));
    }
    CHECK(max_rel < 1e-3);
}

TEST_CASE("halving dt shrinks the series deviation by at least 1.9x") {
    auto p = SystemParams::from_dimensionless(0.5, 0.0, 3.3);
    auto dev = [&](int divisor) {
        const double dt = p.tau / divisor;
        auto traj = integrate(p, nullptr, dt, 3.0 * p.tau);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.values.size(); ++k)
            worst = std::max(worst,
                             std::abs(traj.values[k] - series_amplitude_no_noise(k * dt, p)));
        return worst;
    };
    double coarse = dev(2000);
    double fine = dev(4000);
    CHECK(fine < coarse);
    CHECK(coarse / fine >= 1.9);
}

TEST_CASE("disabling feedback reduces to the bare local evolution") {
    auto p = SystemParams::from_dimensionless(0.5, 2.0, 3.3);
    const double dt = p.tau / 500;
    auto path = generate_path(77, 1500, dt, p.gamma);

    auto off = integrate(p, &path, dt, 3.0 * p.tau, {1.0, 0.0}, false);
    auto on = integrate(p, &path, dt, 3.0 * p.tau, {1.0, 0.0}, true);

    // identical arithmetic before the first echo arrives: bitwise equal
    std::size_t d = 500;
    for (std::size_t k = 0; k <= d; ++k) {
        CHECK(off.values[k].real() == on.values[k].real());
        CHECK(off.values[k].imag() == on.values[k].imag());
    }

    // closed form e^{-Gamma t + i Phi(t)} for the whole horizon
    for (std::size_t k = 0; k < off.values.size(); ++k) {
        double amp = std::exp(-p.Gamma * (k * dt));
        double phase = path.cumulative[k];
        std::complex<double> ref(amp * std::cos(phase), amp * std::sin(phase));
        CHECK(std::abs(off.values[k] - ref) < 1e-11);
    }
}

TEST_CASE("phase shifted by a full winding gives the same trajectory") {
    const double two_pi = 6.283185307179586476925287;
    auto a = SystemParams::from_dimensionless(0.5, 0.0, 0.0);
    auto b = SystemParams::from_dimensionless(0.5, 0.0, two_pi);
    const double dt = a.tau / 250;
    auto ta = integrate(a, nullptr, dt, 3.0);
    auto tb = integrate(b, nullptr, dt, 3.0);
    for (std::size_t k = 0; k < ta.values.size(); ++k) {
        CHECK(ta.values[k].real() == tb.values[k].real());
        CHECK(ta.values[k].imag() == tb.values[k].imag());
    }

    // a generic phase only survives the winding round-trip to ~1 ulp,
    // since 3.3 + 2pi already rounds before reduction
    auto c = SystemParams::from_dimensionless(0.5, 0.0, 3.3);
    auto d = SystemParams::from_dimensionless(0.5, 0.0, 3.3 + two_pi);
    auto tc = integrate(c, nullptr, dt, 3.0);
    auto td = integrate(d, nullptr, dt, 3.0);
    for (std::size_t k = 0; k < tc.values.size(); ++k)
        CHECK(std::abs(tc.values[k] - td.values[k]) < 1e-12);
}

TEST_CASE("noise-free modulus decreases strictly before the first echo") {
    auto p = SystemParams::from_dimensionless(0.5, 0.0, 1.0);
    const double dt = p.tau / 400;
    auto traj = integrate(p, nullptr, dt, 2.0 * p.tau);
    for (std::size_t k = 0; k < 400; ++k)
        CHECK(std::abs(traj.values[k + 1]) < std::abs(traj.values[k]));
}

TEST_CASE("noisy trajectories stay inside the unit disc") {
    auto p = SystemParams::from_dimensionless(0.5, 2.0, 3.3);
    const double dt = p.tau / 500;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto path = generate_path(seed, 1500, dt, p.gamma);
        auto traj = integrate(p, &path, dt, 3.0 * p.tau);
        for (auto v : traj.values) CHECK(std::abs(v) <= 1.0 + 1e-9);
    }
}

TEST_CASE("validation failures") {
    auto p = SystemParams::from_dimensionless(0.5, 2.0, 0.0);
    CHECK_THROWS_AS(integrate(p, nullptr, 0.0003, 2.0), alignment_error);
    CHECK_THROWS_AS(integrate(p, nullptr, 0.001, 2.0, {1.2, 0.3}), invalid_parameter);
    CHECK_THROWS_AS(integrate(p, nullptr, -0.001, 2.0), invalid_parameter);

    auto path = generate_path(9, 100, 0.001, p.gamma);
    CHECK_THROWS_AS(integrate(p, &path, 0.0005, 0.05), alignment_error);
    CHECK_THROWS_AS(integrate(p, &path, 0.001, 2.0), insufficient_data);
}

TEST_CASE("population_series squares the amplitudes") {
    auto p = SystemParams::from_dimensionless(0.5, 0.0, 0.0);
    const double dt = p.tau / 1000;
    auto traj = integrate(p, nullptr, dt, 2.0 * p.tau);
    auto pop = population_series(traj);
    REQUIRE(pop.size() == traj.values.size());
    CHECK(pop[0] == 1.0);
    for (std::size_t k = 0; k < pop.size(); ++k) {
        CHECK(pop[k] == std::norm(traj.values[k]));
        CHECK(pop[k] >= 0.0);
        CHECK(pop[k] <= 1.0 + 1e-9);
        if (k * dt < p.tau)
            CHECK(pop[k] == doctest::Approx(std::exp(-2.0 * p.Gamma * k * dt)).epsilon(1e-11));
    }
}

TEST_CASE("trajectory CSV dump") {
    auto p = SystemParams::from_dimensionless(0.5, 0.0, 3.3);
    auto traj = integrate(p, nullptr, p.tau / 4, p.tau);
    std::ostringstream os;
    csv::write_trajectory(os, traj);

    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "step_index,time,re_amplitude,im_amplitude,population");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        double step, time, re, im, pop;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &step, &time, &re, &im,
                            &pop) == 5);
        CHECK(step == static_cast<double>(rows));
        CHECK(time == rows * traj.dt);
        CHECK(re == traj.values[rows].real());
        CHECK(im == traj.values[rows].imag());
        CHECK(pop == std::norm(traj.values[rows]));
        ++rows;
    }
    CHECK(rows == traj.values.size());
}
