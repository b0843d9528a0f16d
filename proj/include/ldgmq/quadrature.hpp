#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ldgmq {

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1].
inline constexpr double gk_nodes[8] = {
    0.0,
    0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993944, 0.8648644233597691, 0.9491079123427585,
    0.9914553711208126};
inline constexpr double gk_wk[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299785,
    0.0229353220105292};
inline constexpr double gk_wg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = gk_wk[0] * fc;
    double resg = gk_wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double x = h * gk_nodes[i];
        double v = f(c - x) + f(c + x);
        resk += gk_wk[i] * v;
        if (i % 2 == 0) resg += gk_wg[i / 2] * v;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

} // namespace detail

// Adaptive bisection around GK15, absolute tolerance.
template <class F>
inline double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 48) {
    struct seg { double a, b, val, err; int depth; };
    double v, e;
    detail::gk15(f, a, b, v, e);
    std::vector<seg> stack{{a, b, v, e, 0}};
    double total = 0.0, total_err = e;
    while (!stack.empty()) {
        seg s = stack.back();
        stack.pop_back();
        if (s.err <= abs_tol * (s.b - s.a) / (b - a) + 1e-300 || s.depth >= max_depth) {
            total += s.val;
            continue;
        }
        double mid = 0.5 * (s.a + s.b);
        double v1, e1, v2, e2;
        detail::gk15(f, s.a, mid, v1, e1);
        detail::gk15(f, mid, s.b, v2, e2);
        total_err += e1 + e2 - s.err;
        stack.push_back({s.a, mid, v1, e1, s.depth + 1});
        stack.push_back({mid, s.b, v2, e2, s.depth + 1});
    }
    (void)total_err;
    return total;
}

// Integrate with known breakpoints (integrand kinks); points must be sorted.
template <class F>
inline double integrate_segmented(const F& f, const std::vector<double>& breaks,
                                  double abs_tol = 1e-10) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_segmented: need >= 2 breakpoints");
    double sum = 0.0;
    double per_seg = abs_tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum += integrate(f, breaks[i], breaks[i + 1], per_seg);
    return sum;
}

} // namespace ldgmq
