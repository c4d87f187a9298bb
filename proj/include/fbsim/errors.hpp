#pragma once

#include <stdexcept>
#include <string>

namespace fbsim {

// Bad physical/numerical parameter (negative rates, |p0| > 1, ...).
class invalid_parameter : public std::invalid_argument {
public:
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

// A time argument does not lie on the sampling grid. No interpolation is
// ever performed; callers must pass grid-aligned times.
class alignment_error : public std::invalid_argument {
public:
    explicit alignment_error(const std::string& what) : std::invalid_argument(what) {}
};

// Statistical estimator called with too little data (e.g. empty path set).
class insufficient_data : public std::invalid_argument {
public:
    explicit insufficient_data(const std::string& what) : std::invalid_argument(what) {}
};

// Dyadic mesh refinement hit its cap before reaching the requested relative
// tolerance. Carries the last Richardson residual so callers can report it.
class quadrature_failure : public std::runtime_error {
public:
    quadrature_failure(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

} // namespace fbsim
