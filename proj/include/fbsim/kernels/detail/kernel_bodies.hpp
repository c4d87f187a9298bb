#pragma once

// Algorithm bodies for all compute kernels, templated over a lane-ops
// policy O. Each backend TU (scalar / AVX2 / NEON) instantiates these with
// its own ops struct; the per-element operation sequence is therefore
// identical across backends, which is what makes vexp / vsincos /
// fill_gauss / sdde_block / welford bit-identical under dispatch changes.
//
// Only compiler builtins and <cstdint>/<cstddef> are used so the NEON TU can
// be cross-syntax-checked freestanding.
//
// Required ops interface (W = lane count):
//   using F;  using I;          // float64 / uint64 lane types
//   static constexpr size_t W;
//   F load(const double*); void store(double*, F); F set1(double);
//   F add/sub/mul/div(F,F); F fmadd(F,F,F)  -> a*b + c; F sqrt(F);
//   F round_nearest(F);
//   F cmp_gt/cmp_lt/cmp_ge/cmp_eq(F,F);     // all-ones / all-zeros masks
//   F select(F mask, F a, F b);             // bitwise blend
//   F and_f/or_f/xor_f(F,F);
//   I castfi(F); F castif(I);
//   I add_i/sub_i/and_i/or_i/xor_i(I,I); I set1_i(uint64_t);
//   template<int K> I shr(I); template<int K> I shl(I);
//   I cmpeq_i(I,I);
//   I mullo64(I,I);
//   I loadctr(uint64_t base, uint64_t lane_stride);  // base + j*stride per lane

#if __has_include(<cstdint>)
#include <cstddef>
#include <cstdint>
#else
// freestanding cross syntax check: only these two typedefs are needed
namespace std {
using size_t = __SIZE_TYPE__;
using uint64_t = __UINT64_TYPE__;
} // namespace std
#endif

namespace fbsim::kernels::detail {

// ---------------------------------------------------------------- scalar ops

struct scalar_ops {
    using F = double;
    using I = std::uint64_t;
    static constexpr std::size_t W = 1;

    static F load(const double* p) { return *p; }
    static void store(double* p, F v) { *p = v; }
    static F set1(double v) { return v; }
    static F add(F a, F b) { return a + b; }
    static F sub(F a, F b) { return a - b; }
    static F mul(F a, F b) { return a * b; }
    static F div(F a, F b) { return a / b; }
    static F fmadd(F a, F b, F c) { return __builtin_fma(a, b, c); }
    static F sqrt(F a) { return __builtin_sqrt(a); }
    static F round_nearest(F a) { return __builtin_nearbyint(a); }
    static F cmp_gt(F a, F b) { return mask(a > b); }
    static F cmp_lt(F a, F b) { return mask(a < b); }
    static F cmp_ge(F a, F b) { return mask(a >= b); }
    static F cmp_eq(F a, F b) { return mask(a == b); }
    static F select(F m, F a, F b) {
        I mi = castfi(m);
        return castif((castfi(a) & mi) | (castfi(b) & ~mi));
    }
    static F and_f(F a, F b) { return castif(castfi(a) & castfi(b)); }
    static F or_f(F a, F b) { return castif(castfi(a) | castfi(b)); }
    static F xor_f(F a, F b) { return castif(castfi(a) ^ castfi(b)); }
    static I castfi(F a) { return __builtin_bit_cast(I, a); }
    static F castif(I a) { return __builtin_bit_cast(F, a); }
    static I add_i(I a, I b) { return a + b; }
    static I sub_i(I a, I b) { return a - b; }
    static I and_i(I a, I b) { return a & b; }
    static I or_i(I a, I b) { return a | b; }
    static I xor_i(I a, I b) { return a ^ b; }
    static I set1_i(std::uint64_t v) { return v; }
    template <int K> static I shr(I a) { return a >> K; }
    template <int K> static I shl(I a) { return a << K; }
    static I cmpeq_i(I a, I b) { return a == b ? ~I(0) : I(0); }
    static I mullo64(I a, I b) { return a * b; }
    static I loadctr(std::uint64_t base, std::uint64_t) { return base; }

private:
    static F mask(bool b) { return castif(b ? ~I(0) : I(0)); }
};

// ------------------------------------------------------------- constants

inline constexpr double EXP_HI = 709.782712893384;
inline constexpr double EXP_LO = -745.1332191019412;
inline constexpr double LOG2E = 1.4426950408889634074;
inline constexpr double LN2_HI = 6.93147180369123816490e-01;
inline constexpr double LN2_LO = 1.90821492927058770002e-10;
inline constexpr double SQRT2 = 1.4142135623730951;
inline constexpr double TWO_OVER_PI = 0.63661977236758134308;
inline constexpr double PIO2_A = 1.5707963267948966;      // pi/2 rounded
inline constexpr double PIO2_T = 6.123233995736766e-17;   // pi/2 - PIO2_A
inline constexpr double TWO_PI = 6.283185307179586476925286766559;
inline constexpr double MAGIC_I64 = 6755399441055744.0;   // 1.5 * 2^52
inline constexpr std::uint64_t MAGIC_I64_BITS = 0x4338000000000000ULL;
inline constexpr double TWO52 = 4503599627370496.0;       // 2^52
inline constexpr std::uint64_t TWO52_BITS = 0x4330000000000000ULL;
inline constexpr double QUANT = 1099511627776.0;          // 2^40
inline constexpr double INV_QUANT = 1.0 / 1099511627776.0;

// ------------------------------------------------------------- lane helpers

// round-to-nearest double -> int64 lanes, valid for |v| < 2^51
template <class O> typename O::I f2i_nearest(typename O::F v) {
    auto d = O::add(v, O::set1(MAGIC_I64));
    return O::sub_i(O::castfi(d), O::set1_i(MAGIC_I64_BITS));
}

// exact uint64 -> double for values < 2^52
template <class O> typename O::F i2f_small(typename O::I v) {
    auto d = O::castif(O::or_i(v, O::set1_i(TWO52_BITS)));
    return O::sub(d, O::set1(TWO52));
}

template <class O> typename O::F exp_lane(typename O::F x) {
    using F = typename O::F;
    using I = typename O::I;
    F k = O::round_nearest(O::mul(x, O::set1(LOG2E)));
    F r = O::fmadd(k, O::set1(-LN2_HI), x);
    r = O::fmadd(k, O::set1(-LN2_LO), r);
    F p = O::set1(1.6059043836821613e-10);                 // 1/13!
    p = O::fmadd(p, r, O::set1(2.0876756987868099e-09));   // 1/12!
    p = O::fmadd(p, r, O::set1(2.5052108385441720e-08));   // 1/11!
    p = O::fmadd(p, r, O::set1(2.7557319223985888e-07));   // 1/10!
    p = O::fmadd(p, r, O::set1(2.7557319223985893e-06));   // 1/9!
    p = O::fmadd(p, r, O::set1(2.4801587301587302e-05));   // 1/8!
    p = O::fmadd(p, r, O::set1(1.9841269841269841e-04));   // 1/7!
    p = O::fmadd(p, r, O::set1(1.3888888888888889e-03));   // 1/6!
    p = O::fmadd(p, r, O::set1(8.3333333333333332e-03));   // 1/5!
    p = O::fmadd(p, r, O::set1(4.1666666666666664e-02));   // 1/4!
    p = O::fmadd(p, r, O::set1(1.6666666666666666e-01));   // 1/3!
    p = O::fmadd(p, r, O::set1(0.5));
    p = O::fmadd(p, r, O::set1(1.0));
    p = O::fmadd(p, r, O::set1(1.0));
    // 2^k in two factors so that denormal results underflow gradually
    I ki = f2i_nearest<O>(k);
    I k1 = O::sub_i(O::template shr<1>(O::add_i(ki, O::set1_i(2048))), O::set1_i(1024));
    I k2 = O::sub_i(ki, k1);
    F s1 = O::castif(O::template shl<52>(O::add_i(k1, O::set1_i(1023))));
    F s2 = O::castif(O::template shl<52>(O::add_i(k2, O::set1_i(1023))));
    F val = O::mul(O::mul(p, s1), s2);
    F inf = O::castif(O::set1_i(0x7ff0000000000000ULL));
    val = O::select(O::cmp_gt(x, O::set1(EXP_HI)), inf, val);
    val = O::select(O::cmp_lt(x, O::set1(EXP_LO)), O::set1(0.0), val);
    return val;
}

template <class O> typename O::F log_lane(typename O::F x) {
    using F = typename O::F;
    using I = typename O::I;
    // normalize denormals (never hit by our uniform inputs, kept for safety)
    F tiny = O::cmp_lt(x, O::set1(2.2250738585072014e-308));
    F xn = O::select(tiny, O::mul(x, O::set1(18014398509481984.0)), x); // 2^54
    F ebias = O::select(tiny, O::set1(54.0), O::set1(0.0));
    I bits = O::castfi(xn);
    I eraw = O::and_i(O::template shr<52>(bits), O::set1_i(0x7ff));
    F e = O::sub(O::sub(i2f_small<O>(eraw), O::set1(1023.0)), ebias);
    I mbits = O::or_i(O::and_i(bits, O::set1_i(0x000fffffffffffffULL)),
                      O::set1_i(0x3ff0000000000000ULL));
    F m = O::castif(mbits); // [1, 2)
    F big = O::cmp_gt(m, O::set1(SQRT2));
    m = O::select(big, O::mul(m, O::set1(0.5)), m);
    e = O::add(e, O::select(big, O::set1(1.0), O::set1(0.0)));
    F s = O::div(O::sub(m, O::set1(1.0)), O::add(m, O::set1(1.0)));
    F z = O::mul(s, s);
    F w = O::set1(5.2631578947368418e-02);                 // 1/19
    w = O::fmadd(w, z, O::set1(5.8823529411764705e-02));   // 1/17
    w = O::fmadd(w, z, O::set1(6.6666666666666666e-02));   // 1/15
    w = O::fmadd(w, z, O::set1(7.6923076923076927e-02));   // 1/13
    w = O::fmadd(w, z, O::set1(9.0909090909090912e-02));   // 1/11
    w = O::fmadd(w, z, O::set1(1.1111111111111111e-01));   // 1/9
    w = O::fmadd(w, z, O::set1(1.4285714285714285e-01));   // 1/7
    w = O::fmadd(w, z, O::set1(0.2));                      // 1/5
    w = O::fmadd(w, z, O::set1(3.3333333333333331e-01));   // 1/3
    F t = O::add(s, s);
    F logm = O::fmadd(O::mul(t, z), w, t);
    F res = O::fmadd(e, O::set1(LN2_HI), logm);
    res = O::fmadd(e, O::set1(LN2_LO), res);
    // x <= 0 or NaN -> NaN, +inf -> +inf
    F nan = O::castif(O::set1_i(0x7ff8000000000000ULL));
    F inf = O::castif(O::set1_i(0x7ff0000000000000ULL));
    res = O::select(O::cmp_ge(O::set1(0.0), x), nan, res);
    res = O::select(O::cmp_gt(x, O::set1(1.7976931348623157e308)), inf, res);
    res = O::select(O::cmp_eq(x, x), res, nan);
    return res;
}

template <class O> void sincos_lane(typename O::F x, typename O::F& s_out, typename O::F& c_out) {
    using F = typename O::F;
    using I = typename O::I;
    F n = O::round_nearest(O::mul(x, O::set1(TWO_OVER_PI)));
    F r = O::fmadd(n, O::set1(-PIO2_A), x);
    r = O::fmadd(n, O::set1(-PIO2_T), r);
    I q = O::and_i(f2i_nearest<O>(n), O::set1_i(3));
    F z = O::mul(r, r);
    F sp = O::set1(-7.6471637318198164e-13);               // -1/15!
    sp = O::fmadd(sp, z, O::set1(1.6059043836821613e-10)); //  1/13!
    sp = O::fmadd(sp, z, O::set1(-2.5052108385441719e-08));
    sp = O::fmadd(sp, z, O::set1(2.7557319223985893e-06));
    sp = O::fmadd(sp, z, O::set1(-1.9841269841269841e-04));
    sp = O::fmadd(sp, z, O::set1(8.3333333333333332e-03));
    sp = O::fmadd(sp, z, O::set1(-1.6666666666666666e-01));
    F sinr = O::fmadd(O::mul(r, z), sp, r);
    F cp = O::set1(4.7794773323873853e-14);                //  1/16!
    cp = O::fmadd(cp, z, O::set1(-1.1470745597729725e-11));
    cp = O::fmadd(cp, z, O::set1(2.0876756987868099e-09));
    cp = O::fmadd(cp, z, O::set1(-2.7557319223985888e-07));
    cp = O::fmadd(cp, z, O::set1(2.4801587301587302e-05));
    cp = O::fmadd(cp, z, O::set1(-1.3888888888888889e-03));
    cp = O::fmadd(cp, z, O::set1(4.1666666666666664e-02));
    cp = O::fmadd(cp, z, O::set1(-0.5));
    F cosr = O::fmadd(z, cp, O::set1(1.0));
    I swap = O::cmpeq_i(O::and_i(q, O::set1_i(1)), O::set1_i(1));
    F swapm = O::castif(swap);
    F s_pre = O::select(swapm, cosr, sinr);
    F c_pre = O::select(swapm, sinr, cosr);
    I ssign = O::template shl<62>(O::and_i(q, O::set1_i(2)));
    I csign = O::template shl<62>(O::and_i(O::add_i(q, O::set1_i(1)), O::set1_i(2)));
    s_out = O::xor_f(s_pre, O::castif(ssign));
    c_out = O::xor_f(c_pre, O::castif(csign));
}

// ------------------------------------------------------------- array bodies

template <class O> void vexp_body(const double* x, double* out, std::size_t n) {
    constexpr std::size_t W = O::W;
    std::size_t i = 0;
    for (; i + W <= n; i += W) O::store(out + i, exp_lane<O>(O::load(x + i)));
    if constexpr (W > 1) {
        for (; i < n; ++i) out[i] = exp_lane<scalar_ops>(x[i]);
    }
}

template <class O> void vlog_body(const double* x, double* out, std::size_t n) {
    constexpr std::size_t W = O::W;
    std::size_t i = 0;
    for (; i + W <= n; i += W) O::store(out + i, log_lane<O>(O::load(x + i)));
    if constexpr (W > 1) {
        for (; i < n; ++i) out[i] = log_lane<scalar_ops>(x[i]);
    }
}

template <class O> void vsincos_body(const double* x, double* s, double* c, std::size_t n) {
    constexpr std::size_t W = O::W;
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        typename O::F sv, cv;
        sincos_lane<O>(O::load(x + i), sv, cv);
        O::store(s + i, sv);
        O::store(c + i, cv);
    }
    if constexpr (W > 1) {
        for (; i < n; ++i) {
            double sv, cv;
            sincos_lane<scalar_ops>(x[i], sv, cv);
            s[i] = sv;
            c[i] = cv;
        }
    }
}

// one standard normal per counter k: Box-Muller cosine branch on draws 2k, 2k+1
template <class O> typename O::F gauss_lane(std::uint64_t key, std::uint64_t k_base,
                                            std::uint64_t lane_step) {
    using F = typename O::F;
    using I = typename O::I;
    const std::uint64_t GOLD = 0x9e3779b97f4a7c15ULL;
    I c1 = O::loadctr(key + (2 * k_base + 1) * GOLD, 2 * GOLD * lane_step);
    I c2 = O::loadctr(key + (2 * k_base + 2) * GOLD, 2 * GOLD * lane_step);
    // splitmix64 finalizer per lane
    auto fin = [](I z) {
        I t = O::mullo64(O::xor_i(z, O::template shr<30>(z)),
                         O::set1_i(0xbf58476d1ce4e5b9ULL));
        t = O::mullo64(O::xor_i(t, O::template shr<27>(t)),
                       O::set1_i(0x94d049bb133111ebULL));
        return O::xor_i(t, O::template shr<31>(t));
    };
    I a = fin(c1);
    I b = fin(c2);
    F u1 = O::mul(O::add(i2f_small<O>(O::template shr<12>(a)), O::set1(1.0)),
                  O::set1(2.2204460492503131e-16)); // 2^-52, u1 in (0,1]
    F u2 = O::mul(i2f_small<O>(O::template shr<12>(b)), O::set1(2.2204460492503131e-16));
    F rr = O::sqrt(O::mul(O::set1(-2.0), log_lane<O>(u1)));
    F ang = O::mul(u2, O::set1(TWO_PI));
    F sv, cv;
    sincos_lane<O>(ang, sv, cv);
    return O::mul(rr, cv);
}

template <class O> void fill_gauss_body(std::uint64_t key, std::size_t k0, std::size_t n,
                                        double* out) {
    constexpr std::size_t W = O::W;
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        O::store(out + i, gauss_lane<O>(key, k0 + i, 1));
    if constexpr (W > 1) {
        for (; i < n; ++i) out[i] = gauss_lane<scalar_ops>(key, k0 + i, 1);
    }
}

template <class O> void fill_increments_body(std::uint64_t key, std::size_t n, double sigma,
                                             double* out) {
    constexpr std::size_t W = O::W;
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        auto z = gauss_lane<O>(key, i, 1);
        auto v = O::mul(z, O::set1(sigma));
        auto q = O::mul(O::round_nearest(O::mul(v, O::set1(QUANT))), O::set1(INV_QUANT));
        O::store(out + i, q);
    }
    if constexpr (W > 1) {
        for (; i < n; ++i) {
            double z = gauss_lane<scalar_ops>(key, i, 1);
            double v = z * sigma;
            out[i] = __builtin_nearbyint(v * QUANT) * INV_QUANT;
        }
    }
}

template <class O> void welford_body(double* mean, double* m2, const double* x,
                                     double n_after, std::size_t len) {
    constexpr std::size_t W = O::W;
    auto nv = O::set1(n_after);
    std::size_t i = 0;
    for (; i + W <= len; i += W) {
        auto xm = O::load(x + i);
        auto mu = O::load(mean + i);
        auto delta = O::sub(xm, mu);
        auto mu2 = O::add(mu, O::div(delta, nv));
        auto delta2 = O::sub(xm, mu2);
        O::store(mean + i, mu2);
        O::store(m2 + i, O::fmadd(delta, delta2, O::load(m2 + i)));
    }
    if constexpr (W > 1) {
        for (; i < len; ++i) {
            double delta = x[i] - mean[i];
            double mu2 = mean[i] + delta / n_after;
            double delta2 = x[i] - mu2;
            mean[i] = mu2;
            m2[i] = __builtin_fma(delta, delta2, m2[i]);
        }
    }
}

template <class O> double hsum(typename O::F acc) {
    double lanes_buf[O::W];
    O::store(lanes_buf, acc);
    double s = 0.0;
    for (std::size_t l = 0; l < O::W; ++l) s += lanes_buf[l];
    return s;
}

template <class O> double sum_exp_overlap_body(double tau, double alpha, double x,
                                               const double* y, const double* w,
                                               std::size_t n) {
    constexpr std::size_t W = O::W;
    auto acc = O::set1(0.0);
    auto xv = O::set1(x);
    auto tv = O::set1(tau);
    auto av = O::set1(alpha);
    auto zero = O::set1(0.0);
    auto sign = O::castif(O::set1_i(0x7fffffffffffffffULL));
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        auto d = O::and_f(O::sub(xv, O::load(y + i)), sign); // |x - y|
        auto ov = O::sub(tv, d);
        ov = O::select(O::cmp_gt(ov, zero), ov, zero);
        auto e = exp_lane<O>(O::mul(av, ov));
        acc = O::fmadd(O::load(w + i), e, acc);
    }
    double s = hsum<O>(acc);
    if constexpr (W > 1) {
        for (; i < n; ++i) {
            double d = x - y[i];
            d = d < 0 ? -d : d;
            double ov = tau - d;
            ov = ov > 0 ? ov : 0.0;
            s += w[i] * exp_lane<scalar_ops>(alpha * ov);
        }
    }
    return s;
}

template <class O> double sum_exp_overlap_pre_body(double tau, double alpha, double x,
                                                   const double* y, const double* pre,
                                                   const double* w, std::size_t n) {
    constexpr std::size_t W = O::W;
    auto acc = O::set1(0.0);
    auto xv = O::set1(x);
    auto tv = O::set1(tau);
    auto av = O::set1(alpha);
    auto zero = O::set1(0.0);
    auto sign = O::castif(O::set1_i(0x7fffffffffffffffULL));
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        auto d = O::and_f(O::sub(xv, O::load(y + i)), sign);
        auto ov = O::sub(tv, d);
        ov = O::select(O::cmp_gt(ov, zero), ov, zero);
        auto e = exp_lane<O>(O::mul(av, O::add(O::load(pre + i), ov)));
        acc = O::fmadd(O::load(w + i), e, acc);
    }
    double s = hsum<O>(acc);
    if constexpr (W > 1) {
        for (; i < n; ++i) {
            double d = x - y[i];
            d = d < 0 ? -d : d;
            double ov = tau - d;
            ov = ov > 0 ? ov : 0.0;
            s += w[i] * exp_lane<scalar_ops>(alpha * (pre[i] + ov));
        }
    }
    return s;
}

// complex helpers with one canonical op order (keeps backends bit-identical)
template <class O> void cmul(typename O::F ar, typename O::F ai, typename O::F br,
                             typename O::F bi, typename O::F& rr, typename O::F& ri) {
    auto t = O::mul(ai, bi);
    rr = O::fmadd(ar, br, O::xor_f(t, O::castif(O::set1_i(0x8000000000000000ULL))));
    ri = O::fmadd(ar, bi, O::mul(ai, br));
}

template <class O> void sdde_lane_group(const double* inc, double* re, double* im,
                                        std::size_t n_steps, std::size_t stride,
                                        std::size_t d, double decay, double half_decay,
                                        double fb_re, double fb_im, std::size_t lane0) {
    using F = typename O::F;
    auto dv = O::set1(decay);
    auto hv = O::set1(half_decay);
    auto fbr = O::set1(fb_re);
    auto fbi = O::set1(fb_im);
    auto one = O::set1(1.0);
    auto two = O::set1(2.0);
    auto negtwo = O::set1(-2.0);
    auto half = O::set1(0.5);
    for (std::size_t k = 0; k < n_steps; ++k) {
        F w = O::load(inc + k * stride + lane0);
        F sh, ch;
        sincos_lane<O>(O::mul(w, half), sh, ch);
        F cfull = O::fmadd(O::mul(sh, sh), negtwo, one);
        F sfull = O::mul(two, O::mul(sh, ch));
        F A = O::mul(dv, cfull);
        F B = O::mul(dv, sfull);
        F vr = O::load(re + k * stride + lane0);
        F vi = O::load(im + k * stride + lane0);
        F nr, ni;
        cmul<O>(A, B, vr, vi, nr, ni);
        if (k >= d) {
            F mr = O::add(O::load(re + (k - d) * stride + lane0),
                          O::load(re + (k + 1 - d) * stride + lane0));
            F mi = O::add(O::load(im + (k - d) * stride + lane0),
                          O::load(im + (k + 1 - d) * stride + lane0));
            F gr, gi;
            cmul<O>(fbr, fbi, mr, mi, gr, gi);
            F Ah = O::mul(hv, ch);
            F Bh = O::mul(hv, sh);
            F hr, hi;
            cmul<O>(Ah, Bh, gr, gi, hr, hi);
            nr = O::add(nr, hr);
            ni = O::add(ni, hi);
        }
        O::store(re + (k + 1) * stride + lane0, nr);
        O::store(im + (k + 1) * stride + lane0, ni);
    }
}

template <class O> void sdde_block_body(const double* inc, double* re, double* im,
                                        std::size_t n_steps, std::size_t stride,
                                        std::size_t lanes, std::size_t d, double decay,
                                        double half_decay, double fb_re, double fb_im) {
    constexpr std::size_t W = O::W;
    std::size_t l = 0;
    for (; l + W <= lanes; l += W)
        sdde_lane_group<O>(inc, re, im, n_steps, stride, d, decay, half_decay,
                           fb_re, fb_im, l);
    if constexpr (W > 1) {
        for (; l < lanes; ++l)
            sdde_lane_group<scalar_ops>(inc, re, im, n_steps, stride, d, decay,
                                        half_decay, fb_re, fb_im, l);
    }
}

} // namespace fbsim::kernels::detail
