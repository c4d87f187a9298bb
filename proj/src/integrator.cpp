#include "fbsim/integrator.hpp"

#include <cmath>
#include <cstdlib>

#include "fbsim/errors.hpp"
#include "fbsim/kernels/kernels.hpp"

namespace fbsim {

AmplitudeTrajectory integrate(const SystemParams& p, const NoisePath* path, double dt,
                              double t_max, std::complex<double> p0,
                              bool include_feedback) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw invalid_parameter("integrate: dt must be > 0");
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw invalid_parameter("integrate: t_max must be >= 0");
    if (std::norm(p0) > 1.0 + 1e-12)
        throw invalid_parameter("integrate: |p0| must not exceed 1");

    const auto d = static_cast<std::size_t>(std::llround(p.tau / dt));
    if (d == 0 || std::fabs(p.tau - static_cast<double>(d) * dt) > 1e-9 * dt)
        throw alignment_error("integrate: dt must divide tau");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt));

    const double* inc = nullptr;
    std::vector<double> zeros;
    if (path) {
        if (path->dt != dt) throw alignment_error("integrate: path grid does not match dt");
        if (path->increments.size() < n)
            throw insufficient_data("integrate: path shorter than the horizon");
        inc = path->increments.data();
    } else {
        zeros.assign(n, 0.0);
        inc = zeros.data();
    }

    const double decay = std::exp(-p.Gamma * dt);
    const double half_decay = std::exp(-p.Gamma * dt / 2.0);
    const double fb_scale = include_feedback ? p.Gamma * dt / 2.0 : 0.0;
    const double fb_re = fb_scale * std::cos(p.phi);
    const double fb_im = -fb_scale * std::sin(p.phi);

    std::vector<double> re(n + 1), im(n + 1);
    re[0] = p0.real();
    im[0] = p0.imag();
    kernels::sdde_block(inc, re.data(), im.data(), n, 1, 1, d, decay, half_decay, fb_re,
                        fb_im);

    AmplitudeTrajectory traj;
    traj.dt = dt;
    traj.params = p;
    traj.values.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) traj.values[k] = {re[k], im[k]};
    return traj;
}

std::vector<double> population_series(const AmplitudeTrajectory& traj) {
    std::vector<double> pop(traj.values.size());
    for (std::size_t k = 0; k < pop.size(); ++k) pop[k] = std::norm(traj.values[k]);
    return pop;
}

}  // namespace fbsim
