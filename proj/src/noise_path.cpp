#include "fbsim/noise_path.hpp"

#include <cmath>
#include <string>

#include "fbsim/errors.hpp"
#include "fbsim/kernels/kernels.hpp"

namespace fbsim {

namespace {

// Map a time to its grid index, rejecting anything further than 1e-6 steps
// from a node. The tolerance is in step units so it scales with dt.
std::size_t grid_index(double t, double dt, std::size_t max_index, const char* what) {
    double q = t / dt;
    double r = std::nearbyint(q);
    if (!(std::abs(q - r) <= 1e-6) || r < 0.0 || r > double(max_index))
        throw alignment_error(std::string(what) + ": time " + std::to_string(t) +
                              " is not on the sampling grid of step " +
                              std::to_string(dt));
    return static_cast<std::size_t>(r);
}

} // namespace

NoisePath generate_path(std::uint64_t seed, std::size_t n_steps, double dt,
                        double gamma) {
    if (n_steps == 0)
        throw invalid_parameter("generate_path: n_steps must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw invalid_parameter("generate_path: dt must be finite and > 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw invalid_parameter("generate_path: gamma must be finite and >= 0");

    NoisePath path;
    path.dt = dt;
    path.seed_id = seed;
    path.increments.resize(n_steps);
    kernels::fill_increments(seed, n_steps, std::sqrt(gamma * dt),
                             path.increments.data());
    path.cumulative.resize(n_steps + 1);
    path.cumulative[0] = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k)
        path.cumulative[k + 1] = path.cumulative[k] + path.increments[k];
    return path;
}

double phase_integral(const NoisePath& path, double a, double b) {
    if (a > b)
        throw invalid_parameter("phase_integral: requires a <= b");
    std::size_t ia = grid_index(a, path.dt, path.increments.size(), "phase_integral");
    std::size_t ib = grid_index(b, path.dt, path.increments.size(), "phase_integral");
    return path.cumulative[ib] - path.cumulative[ia];
}

std::vector<PhaseAutocovariance> empirical_phase_autocovariance(
    const std::vector<NoisePath>& paths, double window,
    const std::vector<double>& lags) {
    if (paths.empty())
        throw insufficient_data("empirical_phase_autocovariance: no paths given");
    const double dt = paths.front().dt;
    const std::size_t n = paths.front().increments.size();
    for (const auto& p : paths)
        if (p.dt != dt || p.increments.size() != n)
            throw alignment_error(
                "empirical_phase_autocovariance: paths must share one grid");

    const std::size_t w = grid_index(window, dt, n, "empirical_phase_autocovariance");
    if (w == 0)
        throw invalid_parameter("empirical_phase_autocovariance: window too short");
    std::vector<std::size_t> lag_idx(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) {
        lag_idx[j] = grid_index(lags[j], dt, n, "empirical_phase_autocovariance");
        if (w + lag_idx[j] > n)
            throw insufficient_data(
                "empirical_phase_autocovariance: paths shorter than window + lag");
    }

    const std::size_t n_seg = n - w + 1; // windowed phases theta_s, s = 0..n-w
    std::vector<double> theta(n_seg), cs(n_seg), sn(n_seg);
    // per (lag, path): the path-mean of z_{s+l} * conj(z_s)
    std::vector<std::vector<std::complex<double>>> samples(
        lags.size(), std::vector<std::complex<double>>(paths.size()));

    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& c = paths[p].cumulative;
        for (std::size_t s = 0; s < n_seg; ++s) theta[s] = c[s + w] - c[s];
        kernels::vsincos(theta.data(), sn.data(), cs.data(), n_seg);
        for (std::size_t j = 0; j < lags.size(); ++j) {
            const std::size_t l = lag_idx[j];
            const std::size_t cnt = n_seg - l;
            double re = 0.0, im = 0.0;
            for (std::size_t s = 0; s < cnt; ++s) {
                // z_{s+l} * conj(z_s)
                re += cs[s + l] * cs[s] + sn[s + l] * sn[s];
                im += sn[s + l] * cs[s] - cs[s + l] * sn[s];
            }
            samples[j][p] = {re / double(cnt), im / double(cnt)};
        }
    }

    std::vector<PhaseAutocovariance> out(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) {
        std::complex<double> mean{0.0, 0.0};
        for (const auto& z : samples[j]) mean += z;
        mean /= double(paths.size());
        double ss = 0.0;
        for (const auto& z : samples[j]) {
            double d = z.real() - mean.real();
            ss += d * d;
        }
        double se = paths.size() > 1
                        ? std::sqrt(ss / (double(paths.size()) *
                                          double(paths.size() - 1)))
                        : 0.0;
        out[j] = {lags[j], mean, se};
    }
    return out;
}

} // namespace fbsim
