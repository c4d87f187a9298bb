// Runtime kernel dispatch. Picks the best supported backend at startup,
// lets tests and callers pin a specific one.

#include <atomic>
#include <string>

#include "fbsim/errors.hpp"
#include "fbsim/kernels/kernels.hpp"
#include "kernel_table.hpp"

namespace fbsim::kernels {

namespace {

using detail::KernelTable;

const KernelTable* table_for(Level l) {
    switch (l) {
    case Level::scalar: return detail::table_scalar();
    case Level::avx2: return detail::table_avx2();
    case Level::neon: return detail::table_neon();
    }
    return nullptr;
}

bool cpu_supported(Level l) {
    if (l == Level::scalar) return true;
    if (table_for(l) == nullptr) return false;
#if defined(__x86_64__) || defined(_M_X64)
    if (l == Level::avx2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return false;
#elif defined(__aarch64__)
    return l == Level::neon; // ASIMD is mandatory on aarch64
#else
    return false;
#endif
}

struct Dispatch {
    std::atomic<const KernelTable*> table;
    std::atomic<int> level;
    Dispatch() {
        Level best = detect_best();
        table.store(table_for(best), std::memory_order_relaxed);
        level.store(static_cast<int>(best), std::memory_order_relaxed);
    }
};

Dispatch& disp() {
    static Dispatch d;
    return d;
}

const KernelTable& active() {
    return *disp().table.load(std::memory_order_relaxed);
}

} // namespace

const char* level_name(Level l) {
    switch (l) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
    }
    return "?";
}

bool level_supported(Level l) { return cpu_supported(l); }

Level detect_best() {
    if (cpu_supported(Level::avx2)) return Level::avx2;
    if (cpu_supported(Level::neon)) return Level::neon;
    return Level::scalar;
}

Level active_level() {
    return static_cast<Level>(disp().level.load(std::memory_order_relaxed));
}

void set_active_level(Level l) {
    if (!cpu_supported(l))
        throw invalid_parameter(std::string("kernel level not supported here: ") +
                                level_name(l));
    disp().table.store(table_for(l), std::memory_order_relaxed);
    disp().level.store(static_cast<int>(l), std::memory_order_relaxed);
}

void vexp(const double* x, double* out, std::size_t n) { active().vexp(x, out, n); }
void vlog(const double* x, double* out, std::size_t n) { active().vlog(x, out, n); }
void vsincos(const double* x, double* s, double* c, std::size_t n) {
    active().vsincos(x, s, c, n);
}
void fill_gauss(std::uint64_t key, std::size_t k0, std::size_t n, double* out) {
    active().fill_gauss(key, k0, n, out);
}
void fill_increments(std::uint64_t key, std::size_t n, double sigma, double* out) {
    active().fill_increments(key, n, sigma, out);
}
void welford_update(double* mean, double* m2, const double* x, double n_after,
                    std::size_t len) {
    active().welford_update(mean, m2, x, n_after, len);
}
double sum_exp_overlap(double tau, double alpha, double x, const double* y,
                       const double* w, std::size_t n) {
    return active().sum_exp_overlap(tau, alpha, x, y, w, n);
}
double sum_exp_overlap_pre(double tau, double alpha, double x, const double* y,
                           const double* pre, const double* w, std::size_t n) {
    return active().sum_exp_overlap_pre(tau, alpha, x, y, pre, w, n);
}
void sdde_block(const double* inc, double* re, double* im, std::size_t n_steps,
                std::size_t stride, std::size_t lanes, std::size_t d, double decay,
                double half_decay, double fb_re, double fb_im) {
    active().sdde_block(inc, re, im, n_steps, stride, lanes, d, decay, half_decay,
                        fb_re, fb_im);
}

} // namespace fbsim::kernels
