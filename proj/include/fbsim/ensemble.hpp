#pragma once

#include <cstdint>
#include <vector>

#include "fbsim/params.hpp"

namespace fbsim {

// Streaming per-grid-point statistics of the population over an ensemble of
// noise realizations. mean[k] and m2[k] (sum of squared deviations) refer to
// time k * dt; stderr_at(k) = sqrt(m2[k] / (n (n-1))).
struct EnsembleStats {
    std::size_t n = 0;
    double dt = 0.0;
    std::vector<double> mean;
    std::vector<double> m2;

    double stderr_at(std::size_t k) const;
};

// Simulate n_paths independent noise realizations and accumulate population
// statistics on the grid [0, t_max]. Path i draws its noise from a stream
// keyed by (master_seed, i), and per-path accumulation happens in path order
// inside fixed-size chunks merged in chunk order, so the result is bit-
// identical for any worker count. workers = 0 picks the hardware concurrency.
EnsembleStats run_ensemble(const SystemParams& p, std::size_t n_paths,
                           std::uint64_t master_seed, double dt, double t_max,
                           std::size_t workers = 0);

// Parallel composition: statistics of the concatenated sample sets. The empty
// stats object is the identity. Throws alignment_error when both sides are
// nonempty but disagree on the grid.
EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b);

// Noise-minus-no-noise population difference over a (phase, time) grid:
// entry (i, j) = |series(t_j)|^2 - <|P(t_j)|^2> at phase phases[i]. The
// noiseless reference is the analytic series, not a gamma = 0 simulation.
// Every times[j] must lie on the dt grid. The same master seed (hence the
// same noise paths) is reused for every phase so that differences across
// phases are not masked by independent sampling noise.
std::vector<std::vector<double>> phase_difference_map(
    const SystemParams& p_base, const std::vector<double>& phases,
    const std::vector<double>& times, std::size_t n_paths, std::uint64_t master_seed,
    double dt, std::size_t workers = 0);

}  // namespace fbsim
