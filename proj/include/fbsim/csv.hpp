#pragma once

#include <complex>
#include <cstdio>
#include <ostream>
#include <string>

#include "fbsim/ensemble.hpp"
#include "fbsim/integrator.hpp"

namespace fbsim::csv {

// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline void write_ensemble(std::ostream& os, const EnsembleStats& stats) {
    os << "time,mean_population,stderr,n\n";
    for (std::size_t k = 0; k < stats.mean.size(); ++k) {
        os << format_double(k * stats.dt) << ',' << format_double(stats.mean[k]) << ','
           << format_double(stats.stderr_at(k)) << ',' << stats.n << '\n';
    }
}

inline void write_trajectory(std::ostream& os, const AmplitudeTrajectory& traj) {
    os << "step_index,time,re_amplitude,im_amplitude,population\n";
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
        const auto& v = traj.values[k];
        os << k << ',' << format_double(k * traj.dt) << ',' << format_double(v.real())
           << ',' << format_double(v.imag()) << ',' << format_double(std::norm(v)) << '\n';
    }
}

}  // namespace fbsim::csv
