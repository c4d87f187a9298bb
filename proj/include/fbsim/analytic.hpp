#pragma once

#include <complex>

#include "fbsim/gaussian_moments.hpp"
#include "fbsim/params.hpp"

namespace fbsim {

// Closed-form reference curves for the delayed-feedback emitter.
//
// All functions are pure and safe for concurrent evaluation. Populations are
// probabilities; results lie in [0, 1 + 1e-12] for physical parameters.

// Exponential decay without feedback: e^{-2 Gamma t}.
double wigner_weisskopf_population(double t, const SystemParams& p);

// Deterministic delay series for the excited-state amplitude,
//   P(t) = e^{-Gamma t} * sum_{n=0}^{floor(t/tau)} [Gamma e^{-i phi + Gamma tau} (t - n tau)]^n / n!
// with the n-th echo switching on at t = n tau (boundary included).
// The noise strength field of p is ignored.
std::complex<double> series_amplitude_no_noise(double t, const SystemParams& p);

// Noise-averaged population on the first feedback window [tau, 2tau], as
// printed: e^{-2 Gamma t} [1 + 2 Gamma^2 e^{2 Gamma tau} (gamma D + e^{-gamma D} - 1)/gamma^2],
// D = t - tau. Continued analytically through gamma = 0 (-> Gamma^2 e^{2 Gamma tau} D^2).
// Throws invalid_parameter outside [tau, 2tau].
double population_2tau_paper(double t, const SystemParams& p);

// Same window including the cross term between the direct and delayed parts:
// adds 2 Gamma e^{Gamma tau} cos(phi) (t - tau) e^{-gamma tau / 2} inside the bracket.
// At gamma = 0 this reproduces |series_amplitude_no_noise|^2 on the window.
double population_2tau_with_cross(double t, const SystemParams& p);

// Noise-averaged population valid through t = 3tau: assembles the five Gaussian
// phase moments (mean_N, NN*, M, N*M, MM*) with cos(phi) / cos(2 phi) weights.
// Continuous across t = tau and t = 2tau; reduces to the squared series at
// gamma = 0. Propagates quadrature_failure from the moment evaluations and
// throws invalid_parameter outside [0, 3tau].
double population_3tau(double t, const SystemParams& p, const QuadratureControl& ctl = {});

// Effective noise autocorrelation produced by feedback:
// Gamma^2 e^{2 Gamma tau - gamma |delta|}. Symmetric in delta.
double ou_kernel(double delta, const SystemParams& p);

// Mean-square displacement of a particle driven by Ornstein-Uhlenbeck noise:
// (A0 / gamma^2) [gamma t + e^{-gamma t} - 1]. Zero at t = 0, strictly
// increasing for A0 > 0, ~ A0 t^2 / 2 for gamma t << 1.
double ou_msd(double t, const OUReference& ref);

}  // namespace fbsim
