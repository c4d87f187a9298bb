#include "fbsim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "fbsim/analytic.hpp"
#include "fbsim/errors.hpp"
#include "fbsim/kernels/kernels.hpp"

namespace fbsim {

namespace {

// Fixed accumulation granularity: chunk boundaries (and therefore merge
// order and every intermediate rounding) must not depend on the worker
// count. 256 paths per chunk keeps the SoA working set cache-friendly and
// the per-chunk stats arrays small relative to the grid.
constexpr std::size_t k_chunk = 256;
constexpr std::size_t k_lanes = 64;

struct GridSpec {
    std::size_t n_steps;
    std::size_t d;
    double decay;
    double half_decay;
    double fb_re;
    double fb_im;
};

GridSpec make_grid(const SystemParams& p, double dt, double t_max) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw invalid_parameter("run_ensemble: dt must be > 0");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw invalid_parameter("run_ensemble: t_max must be > 0");
    const auto d = static_cast<std::size_t>(std::llround(p.tau / dt));
    if (d == 0 || std::fabs(p.tau - static_cast<double>(d) * dt) > 1e-9 * dt)
        throw alignment_error("run_ensemble: dt must divide tau");
    GridSpec g;
    g.n_steps = static_cast<std::size_t>(std::llround(t_max / dt));
    g.d = d;
    g.decay = std::exp(-p.Gamma * dt);
    g.half_decay = std::exp(-p.Gamma * dt / 2.0);
    g.fb_re = p.Gamma * dt / 2.0 * std::cos(p.phi);
    g.fb_im = -p.Gamma * dt / 2.0 * std::sin(p.phi);
    return g;
}

// One chunk of consecutive path indices, processed in SoA blocks of k_lanes
// trajectories and folded into the chunk statistics in path order.
EnsembleStats accumulate_chunk(const SystemParams& p, const GridSpec& g, double dt,
                               std::uint64_t master_seed, std::size_t first,
                               std::size_t count) {
    const std::size_t rows = g.n_steps + 1;
    EnsembleStats s;
    s.dt = dt;
    s.mean.assign(rows, 0.0);
    s.m2.assign(rows, 0.0);

    const double sigma = std::sqrt(p.gamma * dt);
    std::vector<double> inc(g.n_steps * k_lanes);
    std::vector<double> re(rows * k_lanes), im(rows * k_lanes);
    std::vector<double> one_path(g.n_steps), pop(rows);

    for (std::size_t base = 0; base < count; base += k_lanes) {
        const std::size_t active = std::min(k_lanes, count - base);
        for (std::size_t l = 0; l < active; ++l) {
            kernels::fill_increments(kernels::path_key(master_seed, first + base + l),
                                     g.n_steps, sigma, one_path.data());
            for (std::size_t k = 0; k < g.n_steps; ++k)
                inc[k * k_lanes + l] = one_path[k];
            re[l] = 1.0;
            im[l] = 0.0;
        }
        kernels::sdde_block(inc.data(), re.data(), im.data(), g.n_steps, k_lanes, active,
                            g.d, g.decay, g.half_decay, g.fb_re, g.fb_im);
        for (std::size_t l = 0; l < active; ++l) {
            for (std::size_t k = 0; k < rows; ++k) {
                const double vr = re[k * k_lanes + l];
                const double vi = im[k * k_lanes + l];
                pop[k] = vr * vr + vi * vi;
            }
            ++s.n;
            kernels::welford_update(s.mean.data(), s.m2.data(), pop.data(),
                                    static_cast<double>(s.n), rows);
        }
    }
    return s;
}

}  // namespace

double EnsembleStats::stderr_at(std::size_t k) const {
    if (n < 2) return 0.0;
    return std::sqrt(m2[k] / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

EnsembleStats run_ensemble(const SystemParams& p, std::size_t n_paths,
                           std::uint64_t master_seed, double dt, double t_max,
                           std::size_t workers) {
    if (n_paths == 0) throw invalid_parameter("run_ensemble: n_paths must be >= 1");
    const GridSpec g = make_grid(p, dt, t_max);

    const std::size_t n_chunks = (n_paths + k_chunk - 1) / k_chunk;
    std::vector<EnsembleStats> per_chunk(n_chunks);

    if (workers == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw ? hw : 1;
    }
    workers = std::min(workers, n_chunks);

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](std::size_t slot) {
        try {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                const std::size_t first = c * k_chunk;
                const std::size_t count = std::min(k_chunk, n_paths - first);
                per_chunk[c] = accumulate_chunk(p, g, dt, master_seed, first, count);
            }
        } catch (...) {
            failures[slot] = std::current_exception();
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : failures)
        if (e) std::rethrow_exception(e);

    EnsembleStats acc;
    for (std::size_t c = 0; c < n_chunks; ++c) acc = merge(acc, per_chunk[c]);
    return acc;
}

EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    if (a.mean.size() != b.mean.size() || a.dt != b.dt)
        throw alignment_error("merge: ensembles live on different grids");

    EnsembleStats r;
    r.n = a.n + b.n;
    r.dt = a.dt;
    const std::size_t rows = a.mean.size();
    r.mean.resize(rows);
    r.m2.resize(rows);
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double nab = na + nb;
    for (std::size_t k = 0; k < rows; ++k) {
        const double delta = b.mean[k] - a.mean[k];
        r.mean[k] = a.mean[k] + delta * (nb / nab);
        r.m2[k] = a.m2[k] + b.m2[k] + delta * delta * (na * nb / nab);
    }
    return r;
}

std::vector<std::vector<double>> phase_difference_map(
    const SystemParams& p_base, const std::vector<double>& phases,
    const std::vector<double>& times, std::size_t n_paths, std::uint64_t master_seed,
    double dt, std::size_t workers) {
    if (phases.empty() || times.empty())
        throw invalid_parameter("phase_difference_map: empty grid");

    double t_max = 0.0;
    std::vector<std::size_t> idx(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double q = times[j] / dt;
        const double r = std::nearbyint(q);
        if (std::fabs(q - r) > 1e-6 || r < 0.0)
            throw alignment_error("phase_difference_map: time off the dt grid");
        idx[j] = static_cast<std::size_t>(r);
        t_max = std::max(t_max, times[j]);
    }

    std::vector<std::vector<double>> map(phases.size(),
                                         std::vector<double>(times.size()));
    for (std::size_t i = 0; i < phases.size(); ++i) {
        SystemParams p(p_base.Gamma, p_base.tau, phases[i], p_base.gamma);
        auto stats = run_ensemble(p, n_paths, master_seed, dt, t_max, workers);
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double ref = std::norm(series_amplitude_no_noise(times[j], p));
            map[i][j] = ref - stats.mean[idx[j]];
        }
    }
    return map;
}

}  // namespace fbsim
