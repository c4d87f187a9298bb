#include "fbsim/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "fbsim/errors.hpp"

namespace fbsim {

namespace {

// (x + e^{-x} - 1) / gamma^2 with x = gamma * delta, continued through
// gamma = 0. The direct form loses all significant digits as x -> 0, so
// below x = 1e-6 we switch to the Taylor expansion delta^2 (1/2 - x/6 + x^2/24),
// whose truncation error is below 1e-18 relative there.
double msd_bracket(double gamma, double delta) {
    const double x = gamma * delta;
    if (x < 1e-6) return delta * delta * (0.5 - x / 6.0 + x * x / 24.0);
    return (x + std::expm1(-x)) / (gamma * gamma);
}

void require_window(double t, double lo, double hi, const char* what) {
    const double slack = 1e-9 * (hi - lo);
    if (!(t >= lo - slack && t <= hi + slack))
        throw invalid_parameter(std::string(what) + ": t outside valid window");
}

}  // namespace

double wigner_weisskopf_population(double t, const SystemParams& p) {
    return std::exp(-2.0 * p.Gamma * t);
}

std::complex<double> series_amplitude_no_noise(double t, const SystemParams& p) {
    const double b = p.Gamma * std::exp(p.Gamma * p.tau);
    const std::complex<double> c(b * std::cos(p.phi), -b * std::sin(p.phi));
    const long n_max = static_cast<long>(std::floor(t / p.tau + 1e-12));

    std::complex<double> acc(0.0, 0.0);
    std::complex<double> cpow(1.0, 0.0);
    double inv_fact = 1.0;
    for (long n = 0; n <= n_max; ++n) {
        if (n > 0) {
            cpow *= c;
            inv_fact /= static_cast<double>(n);
        }
        const double u = std::max(0.0, t - static_cast<double>(n) * p.tau);
        double upow = 1.0;
        for (long j = 0; j < n; ++j) upow *= u;
        acc += cpow * (inv_fact * upow);
    }
    return std::exp(-p.Gamma * t) * acc;
}

double population_2tau_paper(double t, const SystemParams& p) {
    require_window(t, p.tau, 2.0 * p.tau, "population_2tau_paper");
    const double d = t - p.tau;
    const double noise =
        2.0 * p.Gamma * p.Gamma * std::exp(2.0 * p.Gamma * p.tau) * msd_bracket(p.gamma, d);
    return std::exp(-2.0 * p.Gamma * t) * (1.0 + noise);
}

double population_2tau_with_cross(double t, const SystemParams& p) {
    require_window(t, p.tau, 2.0 * p.tau, "population_2tau_with_cross");
    const double d = t - p.tau;
    const double cross = 2.0 * p.Gamma * std::exp(p.Gamma * p.tau) * std::cos(p.phi) * d *
                         std::exp(-0.5 * p.gamma * p.tau);
    const double noise =
        2.0 * p.Gamma * p.Gamma * std::exp(2.0 * p.Gamma * p.tau) * msd_bracket(p.gamma, d);
    return std::exp(-2.0 * p.Gamma * t) * (1.0 + cross + noise);
}

double population_3tau(double t, const SystemParams& p, const QuadratureControl& ctl) {
    require_window(t, 0.0, 3.0 * p.tau, "population_3tau");
    t = std::min(t, 3.0 * p.tau);

    const double b = p.Gamma * std::exp(p.Gamma * p.tau);
    const double c1 = std::cos(p.phi);
    const double c2 = std::cos(2.0 * p.phi);

    double bracket = 1.0;
    if (t > p.tau) {
        bracket += 2.0 * b * c1 * mean_N(t, p);
        bracket += b * b * moment_NNstar(t, p, ctl);
    }
    if (t > 2.0 * p.tau) {
        bracket += 2.0 * b * b * c2 * moment_M(t, p, ctl);
        bracket += 2.0 * b * b * b * c1 * moment_NstarM(t, p, ctl);
        bracket += b * b * b * b * moment_MMstar(t, p, ctl);
    }
    return std::exp(-2.0 * p.Gamma * t) * bracket;
}

double ou_kernel(double delta, const SystemParams& p) {
    return p.Gamma * p.Gamma * std::exp(2.0 * p.Gamma * p.tau - p.gamma * std::fabs(delta));
}

double ou_msd(double t, const OUReference& ref) {
    return ref.A0 * msd_bracket(ref.gamma_ou, t);
}

}  // namespace fbsim
