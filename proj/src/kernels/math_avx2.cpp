// AVX2+FMA backend. Compiled with -mavx2 -mfma on x86-64; dispatch.cpp only
// routes here after a runtime cpuid check. The ops below are chosen so each
// lane performs exactly the operation sequence of scalar_ops (correctly
// rounded mul/add/div/sqrt/fma, round-to-nearest-even, bitwise blends),
// which keeps results bit-identical to the scalar backend.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "fbsim/kernels/detail/kernel_bodies.hpp"
#include "kernel_table.hpp"

namespace fbsim::kernels::detail {

namespace {

struct avx2_ops {
    using F = __m256d;
    using I = __m256i;
    static constexpr std::size_t W = 4;

    static F load(const double* p) { return _mm256_loadu_pd(p); }
    static void store(double* p, F v) { _mm256_storeu_pd(p, v); }
    static F set1(double v) { return _mm256_set1_pd(v); }
    static F add(F a, F b) { return _mm256_add_pd(a, b); }
    static F sub(F a, F b) { return _mm256_sub_pd(a, b); }
    static F mul(F a, F b) { return _mm256_mul_pd(a, b); }
    static F div(F a, F b) { return _mm256_div_pd(a, b); }
    static F fmadd(F a, F b, F c) { return _mm256_fmadd_pd(a, b, c); }
    static F sqrt(F a) { return _mm256_sqrt_pd(a); }
    static F round_nearest(F a) {
        return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    }
    static F cmp_gt(F a, F b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
    static F cmp_lt(F a, F b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
    static F cmp_ge(F a, F b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
    static F cmp_eq(F a, F b) { return _mm256_cmp_pd(a, b, _CMP_EQ_OQ); }
    static F select(F m, F a, F b) { return _mm256_blendv_pd(b, a, m); }
    static F and_f(F a, F b) { return _mm256_and_pd(a, b); }
    static F or_f(F a, F b) { return _mm256_or_pd(a, b); }
    static F xor_f(F a, F b) { return _mm256_xor_pd(a, b); }
    static I castfi(F a) { return _mm256_castpd_si256(a); }
    static F castif(I a) { return _mm256_castsi256_pd(a); }
    static I add_i(I a, I b) { return _mm256_add_epi64(a, b); }
    static I sub_i(I a, I b) { return _mm256_sub_epi64(a, b); }
    static I and_i(I a, I b) { return _mm256_and_si256(a, b); }
    static I or_i(I a, I b) { return _mm256_or_si256(a, b); }
    static I xor_i(I a, I b) { return _mm256_xor_si256(a, b); }
    static I set1_i(std::uint64_t v) { return _mm256_set1_epi64x((long long)v); }
    template <int K> static I shr(I a) { return _mm256_srli_epi64(a, K); }
    template <int K> static I shl(I a) { return _mm256_slli_epi64(a, K); }
    static I cmpeq_i(I a, I b) { return _mm256_cmpeq_epi64(a, b); }
    // 64x64 -> low 64 multiply out of 32-bit pieces (no _mm256_mullo_epi64 in AVX2)
    static I mullo64(I a, I b) {
        I lo = _mm256_mul_epu32(a, b);
        I cross = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(a, 32), b),
                                   _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)));
        return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
    }
    static I loadctr(std::uint64_t base, std::uint64_t stride) {
        return _mm256_set_epi64x((long long)(base + 3 * stride),
                                 (long long)(base + 2 * stride),
                                 (long long)(base + stride), (long long)base);
    }
};

constexpr KernelTable k_avx2_table = {
    &vexp_body<avx2_ops>,
    &vlog_body<avx2_ops>,
    &vsincos_body<avx2_ops>,
    &fill_gauss_body<avx2_ops>,
    &fill_increments_body<avx2_ops>,
    &welford_body<avx2_ops>,
    &sum_exp_overlap_body<avx2_ops>,
    &sum_exp_overlap_pre_body<avx2_ops>,
    &sdde_block_body<avx2_ops>,
};

} // namespace

const KernelTable* table_avx2() { return &k_avx2_table; }

} // namespace fbsim::kernels::detail

#else

#include "kernel_table.hpp"

namespace fbsim::kernels::detail {
const KernelTable* table_avx2() { return nullptr; }
} // namespace fbsim::kernels::detail

#endif
