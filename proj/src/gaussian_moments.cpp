#include "fbsim/gaussian_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbsim/errors.hpp"
#include "fbsim/kernels/kernels.hpp"

namespace fbsim {

namespace {

void validate_segment(const Segment& s) {
    if (!(s.b >= s.a) || !std::isfinite(s.a) || !std::isfinite(s.b))
        throw invalid_parameter("Segment: requires finite a <= b");
    if (s.sign != 1 && s.sign != -1)
        throw invalid_parameter("Segment: sign must be +1 or -1");
}

double overlap_raw(double a1, double b1, double a2, double b2) {
    return std::max(0.0, std::min(b1, b2) - std::max(a1, a2));
}

// overlap of the two length-tau windows ending at x and y
double window_overlap(double tau, double x, double y) {
    return std::max(0.0, tau - std::abs(x - y));
}

// composite trapezoid mesh: cells+1 nodes, end weights halved
struct Mesh {
    std::vector<double> x, w;
    Mesh(double a, double b, std::size_t cells) {
        const double h = (b - a) / double(cells);
        x.resize(cells + 1);
        w.assign(cells + 1, h);
        for (std::size_t j = 0; j <= cells; ++j) x[j] = a + double(j) * h;
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
    }
};

// dyadic refinement + Richardson; eval(cells) must be deterministic
template <class F>
double refine(F&& eval, std::size_t base, std::size_t cap, double tol,
              const char* what) {
    double coarse = eval(base);
    for (std::size_t n = base * 2;; n *= 2) {
        double fine = eval(n);
        double extrap = fine + (fine - coarse) / 3.0;
        double err = std::abs(fine - coarse) / 3.0;
        double rel = err / std::max(std::abs(extrap), 1e-300);
        if (rel <= tol) return extrap;
        if (n * 2 > cap)
            throw quadrature_failure(
                std::string(what) + ": refinement cap " + std::to_string(cap) +
                    " cells/dim reached, relative residual " + std::to_string(rel),
                rel);
        coarse = fine;
    }
}

} // namespace

double segment_overlap(const Segment& s1, const Segment& s2) {
    validate_segment(s1);
    validate_segment(s2);
    return overlap_raw(s1.a, s1.b, s2.a, s2.b);
}

double phase_moment(const std::vector<Segment>& segments, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw invalid_parameter("phase_moment: gamma must be finite and >= 0");
    for (const auto& s : segments) validate_segment(s);
    // canonical order -> bitwise permutation invariance
    std::vector<Segment> segs(segments);
    std::stable_sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) {
        return l.a != r.a ? l.a < r.a : l.b < r.b;
    });
    double var_over_gamma = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = 0; j < segs.size(); ++j)
            var_over_gamma += double(segs[i].sign * segs[j].sign) *
                              overlap_raw(segs[i].a, segs[i].b, segs[j].a, segs[j].b);
    double var = gamma * std::max(0.0, var_over_gamma);
    return std::exp(-0.5 * var);
}

double mean_N(double t, const SystemParams& p) {
    if (t < p.tau)
        throw invalid_parameter("mean_N: defined for t >= tau");
    return (t - p.tau) * std::exp(-0.5 * p.gamma * p.tau);
}

double moment_NNstar(double t, const SystemParams& p, const QuadratureControl& ctl) {
    const double tau = p.tau, g = p.gamma;
    if (t <= tau) return 0.0;
    if (g == 0.0) return (t - tau) * (t - tau);
    const double scale = std::exp(-g * tau);
    auto eval = [&](std::size_t cells) {
        Mesh u(tau, t, cells);
        double acc = 0.0;
        for (std::size_t i = 0; i < u.x.size(); ++i)
            acc += u.w[i] * kernels::sum_exp_overlap(tau, g, u.x[i], u.x.data(),
                                                     u.w.data(), u.x.size());
        return scale * acc;
    };
    return refine(eval, ctl.base_nodes_12d, ctl.max_nodes_12d, ctl.rel_tol,
                  "moment_NNstar");
}

double moment_M(double t, const SystemParams& p, const QuadratureControl& ctl) {
    const double tau = p.tau, g = p.gamma;
    if (t <= 2.0 * tau) return 0.0;
    if (g == 0.0) return 0.5 * (t - 2.0 * tau) * (t - 2.0 * tau);
    const double scale = std::exp(-g * tau);
    auto eval = [&](std::size_t cells) {
        Mesh v(2.0 * tau, t, cells);
        Mesh s(0.0, 1.0, cells);
        std::vector<double> wn(s.x.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < v.x.size(); ++i) {
            const double jac = v.x[i] - 2.0 * tau;
            for (std::size_t j = 0; j < s.x.size(); ++j) wn[j] = tau + s.x[j] * jac;
            double inner = kernels::sum_exp_overlap(tau, g, v.x[i], wn.data(),
                                                    s.w.data(), wn.size());
            acc += v.w[i] * jac * inner;
        }
        return scale * acc;
    };
    return refine(eval, ctl.base_nodes_12d, ctl.max_nodes_12d, ctl.rel_tol,
                  "moment_M");
}

double moment_NstarM(double t, const SystemParams& p, const QuadratureControl& ctl) {
    const double tau = p.tau, g = p.gamma;
    if (t <= 2.0 * tau) return 0.0;
    if (g == 0.0) {
        const double l2 = t - 2.0 * tau;
        return (t - tau) * 0.5 * l2 * l2;
    }
    const double scale = std::exp(-1.5 * g * tau);
    auto eval = [&](std::size_t cells) {
        Mesh u(tau, t, cells);
        Mesh v(2.0 * tau, t, cells);
        Mesh s(0.0, 1.0, cells);
        std::vector<double> pre(u.x.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < v.x.size(); ++i) {
            const double vv = v.x[i];
            const double jac = vv - 2.0 * tau;
            for (std::size_t k = 0; k < u.x.size(); ++k)
                pre[k] = window_overlap(tau, u.x[k], vv);
            double mid = 0.0;
            for (std::size_t j = 0; j < s.x.size(); ++j) {
                const double w = tau + s.x[j] * jac;
                mid += s.w[j] * kernels::sum_exp_overlap_pre(tau, g, w, u.x.data(),
                                                             pre.data(), u.w.data(),
                                                             u.x.size());
            }
            acc += v.w[i] * jac * mid;
        }
        return scale * acc;
    };
    return refine(eval, ctl.base_nodes_34d, ctl.max_nodes_3d, ctl.rel_tol,
                  "moment_NstarM");
}

double moment_MMstar(double t, const SystemParams& p, const QuadratureControl& ctl) {
    const double tau = p.tau, g = p.gamma;
    if (t <= 2.0 * tau) return 0.0;
    if (g == 0.0) {
        const double half = 0.5 * (t - 2.0 * tau) * (t - 2.0 * tau);
        return half * half;
    }
    const double scale = std::exp(-2.0 * g * tau);
    auto eval = [&](std::size_t cells) {
        Mesh v(2.0 * tau, t, cells);
        Mesh s(0.0, 1.0, cells);
        std::vector<double> qn(s.x.size()), pre(s.x.size());
        double acc = 0.0;
        // integrand is symmetric under swapping the conjugated pair, so only
        // the lower triangle in (v, p) is evaluated
        for (std::size_t i = 0; i < v.x.size(); ++i) {
            const double vv = v.x[i];
            const double jv = vv - 2.0 * tau;
            for (std::size_t k = 0; k <= i; ++k) {
                const double pp = v.x[k];
                const double jp = pp - 2.0 * tau;
                for (std::size_t j = 0; j < s.x.size(); ++j) {
                    qn[j] = tau + s.x[j] * jp;
                    pre[j] = window_overlap(tau, vv, qn[j]);
                }
                const double ovvp = window_overlap(tau, vv, pp);
                double mid = 0.0;
                for (std::size_t j = 0; j < s.x.size(); ++j) {
                    const double w = tau + s.x[j] * jv;
                    const double c = kernels::s_exp(g * (ovvp + window_overlap(tau, w, pp)));
                    mid += s.w[j] * c *
                           kernels::sum_exp_overlap_pre(tau, g, w, qn.data(),
                                                        pre.data(), s.w.data(),
                                                        qn.size());
                }
                const double contrib = v.w[i] * v.w[k] * jv * jp * mid;
                acc += (k < i) ? 2.0 * contrib : contrib;
            }
        }
        return scale * acc;
    };
    return refine(eval, ctl.base_nodes_34d, ctl.max_nodes_4d, ctl.rel_tol,
                  "moment_MMstar");
}

} // namespace fbsim
