#pragma once

#include <complex>
#include <vector>

#include "fbsim/noise_path.hpp"
#include "fbsim/params.hpp"

namespace fbsim {

// One realization of the amplitude dynamics
//   dv/dt = (i F_t - Gamma) v(t) + Gamma e^{-i phi} v(t - tau) theta(t - tau)
// on a uniform grid. values[0] is the initial condition; values[k] is the
// amplitude at time k * dt.
struct AmplitudeTrajectory {
    double dt = 0.0;
    std::vector<std::complex<double>> values;
    SystemParams params;
};

// Integrate one trajectory over [0, t_max]. The local part advances by the
// exact factor e^{-Gamma dt + i dW_k} per step (dW_k = 0 when path is null);
// the delayed part enters from step index d = tau/dt onward as
// Gamma dt e^{-i phi} times the midpoint of the two bracketing delayed values,
// carried by the half-step local factor. Second order against the
// deterministic series.
//
// Preconditions: dt must divide tau to ~1e-9 relative (alignment_error
// otherwise); |p0| <= 1 (invalid_parameter); a supplied path must share dt
// exactly (alignment_error) and cover the horizon (insufficient_data).
// include_feedback = false drops the delayed term entirely, leaving the bare
// local evolution e^{-Gamma t + i Phi(t)} p0.
AmplitudeTrajectory integrate(const SystemParams& p, const NoisePath* path, double dt,
                              double t_max, std::complex<double> p0 = {1.0, 0.0},
                              bool include_feedback = true);

// Pointwise excited-state population |values[k]|^2.
std::vector<double> population_series(const AmplitudeTrajectory& traj);

}  // namespace fbsim
