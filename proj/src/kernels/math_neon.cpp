// NEON (aarch64 ASIMD) backend. Same construction as the AVX2 one: lane ops
// with IEEE semantics identical to scalar_ops, shared bodies, two lanes.
// Guarded so x86 builds compile this TU to a stub.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "fbsim/kernels/detail/kernel_bodies.hpp"
#include "kernel_table.hpp"

namespace fbsim::kernels::detail {

namespace {

struct neon_ops {
    using F = float64x2_t;
    using I = uint64x2_t;
    static constexpr std::size_t W = 2;

    static F load(const double* p) { return vld1q_f64(p); }
    static void store(double* p, F v) { vst1q_f64(p, v); }
    static F set1(double v) { return vdupq_n_f64(v); }
    static F add(F a, F b) { return vaddq_f64(a, b); }
    static F sub(F a, F b) { return vsubq_f64(a, b); }
    static F mul(F a, F b) { return vmulq_f64(a, b); }
    static F div(F a, F b) { return vdivq_f64(a, b); }
    static F fmadd(F a, F b, F c) { return vfmaq_f64(c, a, b); }
    static F sqrt(F a) { return vsqrtq_f64(a); }
    static F round_nearest(F a) { return vrndnq_f64(a); }
    static F cmp_gt(F a, F b) { return vreinterpretq_f64_u64(vcgtq_f64(a, b)); }
    static F cmp_lt(F a, F b) { return vreinterpretq_f64_u64(vcltq_f64(a, b)); }
    static F cmp_ge(F a, F b) { return vreinterpretq_f64_u64(vcgeq_f64(a, b)); }
    static F cmp_eq(F a, F b) { return vreinterpretq_f64_u64(vceqq_f64(a, b)); }
    static F select(F m, F a, F b) {
        return vbslq_f64(vreinterpretq_u64_f64(m), a, b);
    }
    static F and_f(F a, F b) {
        return vreinterpretq_f64_u64(
            vandq_u64(vreinterpretq_u64_f64(a), vreinterpretq_u64_f64(b)));
    }
    static F or_f(F a, F b) {
        return vreinterpretq_f64_u64(
            vorrq_u64(vreinterpretq_u64_f64(a), vreinterpretq_u64_f64(b)));
    }
    static F xor_f(F a, F b) {
        return vreinterpretq_f64_u64(
            veorq_u64(vreinterpretq_u64_f64(a), vreinterpretq_u64_f64(b)));
    }
    static I castfi(F a) { return vreinterpretq_u64_f64(a); }
    static F castif(I a) { return vreinterpretq_f64_u64(a); }
    static I add_i(I a, I b) { return vaddq_u64(a, b); }
    static I sub_i(I a, I b) { return vsubq_u64(a, b); }
    static I and_i(I a, I b) { return vandq_u64(a, b); }
    static I or_i(I a, I b) { return vorrq_u64(a, b); }
    static I xor_i(I a, I b) { return veorq_u64(a, b); }
    static I set1_i(std::uint64_t v) { return vdupq_n_u64(v); }
    template <int K> static I shr(I a) { return vshrq_n_u64(a, K); }
    template <int K> static I shl(I a) { return vshlq_n_u64(a, K); }
    static I cmpeq_i(I a, I b) { return vceqq_u64(a, b); }
    // 64x64 -> low 64 multiply from 32-bit halves (no 64-bit NEON multiply)
    static I mullo64(I a, I b) {
        uint32x2_t a_lo = vmovn_u64(a);
        uint32x2_t b_lo = vmovn_u64(b);
        uint32x2_t a_hi = vshrn_n_u64(a, 32);
        uint32x2_t b_hi = vshrn_n_u64(b, 32);
        uint64x2_t lo = vmull_u32(a_lo, b_lo);
        uint64x2_t cross = vmlal_u32(vmull_u32(a_lo, b_hi), a_hi, b_lo);
        return vaddq_u64(lo, vshlq_n_u64(cross, 32));
    }
    static I loadctr(std::uint64_t base, std::uint64_t stride) {
        std::uint64_t v[2] = {base, base + stride};
        return vld1q_u64(v);
    }
};

constexpr KernelTable k_neon_table = {
    &vexp_body<neon_ops>,
    &vlog_body<neon_ops>,
    &vsincos_body<neon_ops>,
    &fill_gauss_body<neon_ops>,
    &fill_increments_body<neon_ops>,
    &welford_body<neon_ops>,
    &sum_exp_overlap_body<neon_ops>,
    &sum_exp_overlap_pre_body<neon_ops>,
    &sdde_block_body<neon_ops>,
};

} // namespace

const KernelTable* table_neon() { return &k_neon_table; }

} // namespace fbsim::kernels::detail

#else

#include "kernel_table.hpp"

namespace fbsim::kernels::detail {
const KernelTable* table_neon() { return nullptr; }
} // namespace fbsim::kernels::detail

#endif
