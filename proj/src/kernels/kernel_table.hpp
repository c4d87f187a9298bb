#pragma once

// Internal dispatch table. Each backend TU fills one of these with its
// instantiations of the shared kernel bodies; dispatch.cpp routes the public
// entry points through the active table.

#if __has_include(<cstdint>)
#include <cstddef>
#include <cstdint>
#else
namespace std {
using size_t = __SIZE_TYPE__;
using uint64_t = __UINT64_TYPE__;
} // namespace std
#endif

namespace fbsim::kernels::detail {

struct KernelTable {
    void (*vexp)(const double*, double*, std::size_t);
    void (*vlog)(const double*, double*, std::size_t);
    void (*vsincos)(const double*, double*, double*, std::size_t);
    void (*fill_gauss)(std::uint64_t, std::size_t, std::size_t, double*);
    void (*fill_increments)(std::uint64_t, std::size_t, double, double*);
    void (*welford_update)(double*, double*, const double*, double, std::size_t);
    double (*sum_exp_overlap)(double, double, double, const double*, const double*,
                              std::size_t);
    double (*sum_exp_overlap_pre)(double, double, double, const double*, const double*,
                                  const double*, std::size_t);
    void (*sdde_block)(const double*, double*, double*, std::size_t, std::size_t,
                       std::size_t, std::size_t, double, double, double, double);
};

// each returns nullptr when the backend is compiled out on this target
const KernelTable* table_scalar();
const KernelTable* table_avx2();
const KernelTable* table_neon();

} // namespace fbsim::kernels::detail
