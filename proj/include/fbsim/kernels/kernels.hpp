#pragma once

// Runtime-dispatched compute kernels.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. All variants of
// the elementwise kernels (vexp / vlog / vsincos / fill_gauss /
// fill_increments / welford_update / sdde_block) are generated from one
// templated algorithm body and perform the identical operation sequence per
// element, so their results are bit-identical across variants. The reduction
// kernels (sum_exp_overlap*) accumulate in lane-parallel order and agree with
// the scalar reference only to rounding (tested at 1e-12 relative).

#include <cstddef>
#include <cstdint>

namespace fbsim::kernels {

enum class Level { scalar = 0, avx2 = 1, neon = 2 };

const char* level_name(Level l);
bool level_supported(Level l);
Level detect_best();          // best supported level on this machine
Level active_level();         // currently dispatched level
void set_active_level(Level); // throws invalid_parameter if unsupported

// --- elementwise transcendentals -----------------------------------------

void vexp(const double* x, double* out, std::size_t n);
void vlog(const double* x, double* out, std::size_t n);
void vsincos(const double* x, double* s, double* c, std::size_t n);

// Single-value forms (always the scalar body; same polynomials, same bits).
double s_exp(double x);
double s_log(double x);
void s_sincos(double x, double& s, double& c);

// --- counter-based RNG ----------------------------------------------------

// Stateless avalanche mix (splitmix64 finalizer). Random access by
// construction: draw k of stream `key` is mix64(key + (k+1)*GOLDEN).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t GOLDEN = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t stream_draw(std::uint64_t key, std::uint64_t k) {
    return mix64(key + (k + 1) * GOLDEN);
}

// Per-path stream key derived from (master seed, path index); paths can be
// generated in any order on any worker and always see the same stream.
inline std::uint64_t path_key(std::uint64_t master, std::uint64_t index) {
    std::uint64_t k0 = mix64(master ^ 0x6a09e667f3bcc909ULL);
    return mix64(k0 + (index + 1) * GOLDEN);
}

// Standard normals z_k for k in [k0, k0+n): Box-Muller on two counter draws
// per normal. Bit-identical across dispatch levels.
void fill_gauss(std::uint64_t key, std::size_t k0, std::size_t n, double* out);

// Wiener increments sigma * z_k, quantized to multiples of 2^-40 so that
// prefix sums (and their differences) are exact in double precision while
// the running sum stays below 2^13.
void fill_increments(std::uint64_t key, std::size_t n, double sigma, double* out);

// --- streaming statistics --------------------------------------------------

// One Welford step over `len` independent accumulators: n_after is the count
// including x. mean/m2 updated in place.
void welford_update(double* mean, double* m2, const double* x,
                    double n_after, std::size_t len);

// --- quadrature reductions --------------------------------------------------

// sum_j w[j] * exp(alpha * max(0, tau - |x - y[j]|))
double sum_exp_overlap(double tau, double alpha, double x,
                       const double* y, const double* w, std::size_t n);

// sum_j w[j] * exp(alpha * (pre[j] + max(0, tau - |x - y[j]|)))
double sum_exp_overlap_pre(double tau, double alpha, double x,
                           const double* y, const double* pre,
                           const double* w, std::size_t n);

// --- delayed-feedback stepping ----------------------------------------------

// Advance `lanes` independent amplitude trajectories through n_steps of
//   v_{k+1} = e^{-Gamma dt} e^{i dW_k} v_k
//           + [k >= d] (fb) (v_{k-d} + v_{k+1-d}) e^{-Gamma dt/2} e^{i dW_k/2}
// with fb = (Gamma dt / 2) e^{-i phi}. Layout is SoA: re[k*stride + l] for
// step k, lane l; inc likewise (n_steps rows). Row 0 must hold the initial
// value. decay = e^{-Gamma dt} and half_decay = e^{-Gamma dt/2} are passed in
// so every lane and every dispatch level uses the same constants.
void sdde_block(const double* inc, double* re, double* im,
                std::size_t n_steps, std::size_t stride, std::size_t lanes,
                std::size_t d, double decay, double half_decay,
                double fb_re, double fb_im);

} // namespace fbsim::kernels
