#pragma once

// White-noise phase realizations on a uniform grid.
//
// The noise only ever enters downstream formulas through the integrated
// phase phi(b,a) = integral of F over [a,b], so a path stores the per-step
// increments dW_k ~ N(0, gamma*dt) and their prefix sums. Increments are
// quantized to multiples of 2^-40 by the generator, which makes prefix
// sums and all window differences bit-exact (see kernels::fill_increments).

#include <complex>
#include <cstdint>
#include <vector>

namespace fbsim {

struct NoisePath {
    double dt = 0.0;
    std::vector<double> increments;  // dW_k, k = 0..n-1
    std::vector<double> cumulative;  // Phi_k = sum_{j<k} dW_j, size n+1, [0]=0
    std::uint64_t seed_id = 0;
};

// Deterministic function of (seed, n_steps, dt, gamma). gamma=0 gives an
// exactly-zero path. Throws invalid_parameter on bad arguments.
NoisePath generate_path(std::uint64_t seed, std::size_t n_steps, double dt,
                        double gamma);

// phi(b,a) = cumulative[index(b)] - cumulative[index(a)], bit-exact and
// additive. a and b must be grid-aligned (alignment_error otherwise, no
// interpolation) and a <= b (invalid_parameter otherwise).
double phase_integral(const NoisePath& path, double a, double b);

struct PhaseAutocovariance {
    double lag = 0.0;
    std::complex<double> estimate;  // mean over paths of per-path averages
    double stderr_ = 0.0;           // standard error of the real part (0 if n<2)
};

// Lagged correlation of windowed phase factors: for each lag D the ensemble
// average of e^{i phi(s+D+w, s+D)} * e^{-i phi(s+w, s)} over all grid starts
// s and all paths, with one sample per path for the error estimate.
// Gaussian oracle: expectation e^{-gamma * min(D, w)}.
// Errors: empty collection or paths shorter than w+D -> insufficient_data;
// mismatched grids or off-grid window/lags -> alignment_error.
std::vector<PhaseAutocovariance> empirical_phase_autocovariance(
    const std::vector<NoisePath>& paths, double window,
    const std::vector<double>& lags);

} // namespace fbsim
