// Scalar backend: reference instantiation of the shared kernel bodies.
// This is the portable fallback and the ground truth the SIMD backends are
// compared against bit-for-bit in the test suite.

#include "fbsim/kernels/detail/kernel_bodies.hpp"
#include "fbsim/kernels/kernels.hpp"
#include "kernel_table.hpp"

namespace fbsim::kernels::detail {

namespace {

constexpr KernelTable k_scalar_table = {
    &vexp_body<scalar_ops>,
    &vlog_body<scalar_ops>,
    &vsincos_body<scalar_ops>,
    &fill_gauss_body<scalar_ops>,
    &fill_increments_body<scalar_ops>,
    &welford_body<scalar_ops>,
    &sum_exp_overlap_body<scalar_ops>,
    &sum_exp_overlap_pre_body<scalar_ops>,
    &sdde_block_body<scalar_ops>,
};

} // namespace

const KernelTable* table_scalar() { return &k_scalar_table; }

} // namespace fbsim::kernels::detail

namespace fbsim::kernels {

double s_exp(double x) { return detail::exp_lane<detail::scalar_ops>(x); }
double s_log(double x) { return detail::log_lane<detail::scalar_ops>(x); }
void s_sincos(double x, double& s, double& c) {
    detail::sincos_lane<detail::scalar_ops>(x, s, c);
}

} // namespace fbsim::kernels
