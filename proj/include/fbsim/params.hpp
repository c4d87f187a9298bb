#pragma once

#include <cmath>

#include "fbsim/errors.hpp"

namespace fbsim {

// Model constants for one run. Gamma is the emitter decay rate, tau the
// feedback round-trip delay, phi the accumulated optical phase over one
// round trip (only e^{+-i phi} ever enters, so phi is stored reduced to
// [0, 2pi)), gamma the white-noise strength of the energy fluctuations
// (<F_t F_s> = gamma * delta(t-s)).
struct SystemParams {
    double Gamma = 0.0;
    double tau = 1.0;
    double phi = 0.0;
    double gamma = 0.0;

    SystemParams() = default;

    SystemParams(double Gamma_, double tau_, double phi_, double gamma_)
        : Gamma(Gamma_), tau(tau_), phi(reduce_phase(phi_)), gamma(gamma_) {
        if (!(Gamma >= 0.0) || !std::isfinite(Gamma))
            throw invalid_parameter("SystemParams: Gamma must be finite and >= 0");
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw invalid_parameter("SystemParams: tau must be finite and > 0");
        if (!(gamma >= 0.0) || !std::isfinite(gamma))
            throw invalid_parameter("SystemParams: gamma must be finite and >= 0");
        if (!std::isfinite(phi))
            throw invalid_parameter("SystemParams: phi must be finite");
    }

    // Dimensionless construction: tau sets the unit of time.
    static SystemParams from_dimensionless(double Gamma_tau, double gamma_tau,
                                           double phi, double tau = 1.0) {
        if (!(tau > 0.0))
            throw invalid_parameter("SystemParams: tau must be > 0");
        return SystemParams(Gamma_tau / tau, tau, phi, gamma_tau / tau);
    }

    // IEEE remainder is exact, so a shift by an exactly-representable
    // multiple of 2pi reduces back to the original bits.
    static double reduce_phase(double phi) {
        constexpr double two_pi = 6.283185307179586476925286766559;
        double r = std::remainder(phi, two_pi);
        if (r < 0.0) r += two_pi;
        if (r >= two_pi) r = 0.0; // r==2pi after the += when remainder ~ -eps
        return r;
    }
};

// Parameters of the effective Ornstein-Uhlenbeck process that the feedback
// loop imprints on the delayed-phase correlations: amplitude A0 and
// relaxation rate gamma_ou.
struct OUReference {
    double A0 = 0.0;
    double gamma_ou = 1.0;

    OUReference() = default;

    OUReference(double A0_, double gamma_ou_) : A0(A0_), gamma_ou(gamma_ou_) {
        if (!(A0 >= 0.0) || !std::isfinite(A0))
            throw invalid_parameter("OUReference: A0 must be finite and >= 0");
        if (!(gamma_ou > 0.0) || !std::isfinite(gamma_ou))
            throw invalid_parameter("OUReference: gamma_ou must be finite and > 0");
    }
};

} // namespace fbsim
