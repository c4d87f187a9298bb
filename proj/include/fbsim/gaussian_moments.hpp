#pragma once

// Exact noise averages of products of phase factors e^{+-i phi(b,a)} for
// white Gaussian phase noise, and the five averaged functionals of the
// delayed-feedback solution through the third delay interval.
//
// Everything rests on one identity: for a zero-mean Gaussian X,
// <e^{iX}> = e^{-Var(X)/2}, and for X = sum_k sign_k * phi(b_k, a_k) the
// variance is gamma * sum_kj sign_k sign_j * overlap([a_k,b_k],[a_j,b_j]).

#include <cstddef>
#include <vector>

#include "fbsim/params.hpp"

namespace fbsim {

// One integrated-noise window with the sign of i*phi in the exponent.
struct Segment {
    double a = 0.0;
    double b = 0.0;
    int sign = +1;
};

// Length of the intersection of the two windows (>= 0, symmetric).
double segment_overlap(const Segment& s1, const Segment& s2);

// <exp(i sum_k sign_k phi(b_k,a_k))> — always real, in (0, 1]. Invariant
// under permutation of the list (bitwise: terms are summed in a canonical
// order) and under a global sign flip.
double phase_moment(const std::vector<Segment>& segments, double gamma);

// Dyadic trapezoid refinement with Richardson extrapolation. base_* are
// cells per dimension at the coarsest level, max_* the refinement caps
// (quadrature_failure beyond, carrying the relative residual).
struct QuadratureControl {
    double rel_tol = 1e-4;
    std::size_t base_nodes_12d = 512;
    std::size_t base_nodes_34d = 128;
    std::size_t max_nodes_12d = 8192;
    std::size_t max_nodes_3d = 1024;
    std::size_t max_nodes_4d = 512;
};

// <N(t,tau)> = (t-tau) e^{-gamma tau/2} (closed form; the averaged
// integrand is constant). Throws invalid_parameter for t < tau.
double mean_N(double t, const SystemParams& p);

// The remaining averages of the once- and twice-delayed integrals
// N(t,tau) = int_tau^t e^{-i phi(t1,t1-tau)} dt1 and
// M(t,2tau) = int_2tau^t dt1 e^{-i phi(t1,t1-tau)} int_tau^{t1-tau} dt2
//             e^{-i phi(t2,t2-tau)}.
// All four are real; below their domain threshold they return 0.
// gamma=0 short-circuits to the exact noiseless limits.
double moment_NNstar(double t, const SystemParams& p, const QuadratureControl& ctl = {});
double moment_M(double t, const SystemParams& p, const QuadratureControl& ctl = {});
double moment_NstarM(double t, const SystemParams& p, const QuadratureControl& ctl = {});
double moment_MMstar(double t, const SystemParams& p, const QuadratureControl& ctl = {});

} // namespace fbsim
