#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ldgmq/bounds.hpp"
#include "ldgmq/code.hpp"
#include "ldgmq/lp.hpp"
#include "ldgmq/quadrature.hpp"

namespace ldgmq {

// ---------------------------------------------------------------------------
// erasure-approximation EXIT algebra, binary codes

struct ebp_point {
    double x = 0.0;      // info in bit-to-check messages
    double icb = 0.0;    // info out of check nodes
    double ib = 0.0;     // prior info at the fixed point (can be < 0)
    double ibext = 0.0;  // extrinsic info at the fixed point
};

struct ebp_curve {
    std::vector<ebp_point> pts;
};

inline double edge_poly(const degree_dist& d, double x) {  // sum v_d x^{d-1}
    double s = 0.0;
    for (auto& [deg, vd] : d.v) s += vd * std::pow(x, deg - 1);
    return s;
}

inline double edge_poly_deriv(const degree_dist& d, double x) {  // sum (d-1) v_d x^{d-2}
    double s = 0.0;
    for (auto& [deg, vd] : d.v)
        if (deg >= 2) s += vd * (deg - 1) * std::pow(x, deg - 2);
    return s;
}

inline ebp_curve make_ebp_curve(const degree_dist& dist, double ic, int grid_n = 1001) {
    ebp_curve c;
    c.pts.reserve(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        double x = static_cast<double>(i) / (grid_n - 1);
        ebp_point p;
        p.x = x;
        p.icb = ic * edge_poly(dist, x);
        double y = 1.0 - p.icb;
        p.ib = 1.0 - (1.0 - x) / std::pow(y, dist.d_b - 1);
        p.ibext = 1.0 - std::pow(y, dist.d_b);
        c.pts.push_back(p);
    }
    return c;
}

// stability polynomial: prior info levels <= 1/max s(x) keep the fixed-point
// trace single-valued
inline double s_of_x(const degree_dist& dist, double x) {
    return edge_poly(dist, x) + (dist.d_b - 1) * (1.0 - x) * edge_poly_deriv(dist, x);
}

inline double icthr_ea(const degree_dist& dist, int grid_n = 1001) {
    double smax = 0.0;
    for (int i = 0; i < grid_n; ++i)
        smax = std::max(smax, s_of_x(dist, static_cast<double>(i) / (grid_n - 1)));
    return 1.0 / smax;
}

// both single-valuedness conditions at a given channel info level
inline bool monotonicity_holds(const degree_dist& dist, double ic, int grid_n = 1001) {
    for (auto& [deg, vd] : dist.v)
        if (deg == 1 && vd > 1e-9) return false;
    return ic <= icthr_ea(dist, grid_n) + 1e-12;
}

// area under the fixed-point trace; the start-gap correction matters only
// when degree-1 check nodes exist
inline double ebp_area(const degree_dist& dist, double ic, int grid_n = 4001) {
    double area = 0.0;
    double prev_ib = 0.0, prev_ext = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        double x = static_cast<double>(i) / (grid_n - 1);
        double y = 1.0 - ic * edge_poly(dist, x);
        double ib = 1.0 - (1.0 - x) / std::pow(y, dist.d_b - 1);
        double ext = 1.0 - std::pow(y, dist.d_b);
        if (i > 0) area += (1.0 - 0.5 * (ib + prev_ib)) * (ext - prev_ext);
        prev_ib = ib;
        prev_ext = ext;
    }
    // the trace starts above zero extrinsic info when degree-1 checks
    // exist; the strip below the start belongs to the enclosed region
    double icb0 = ic * edge_poly(dist, 0.0);
    return area + (1.0 - std::pow(1.0 - icb0, dist.d_b));
}

// ---------------------------------------------------------------------------
// component channels of the 2^K-ary mapping

struct mary_channel {
    int K = 1;
    double t = 0.0;
    std::vector<double> ic_k;   // info of bit k' given k' known lower bits
    double ic = 0.0;            // mean of ic_k
    std::vector<double> gamma;  // ic_k / ic
};

// average conditional entropies H(c_k | c_S, y) for every conditioning set,
// folded into per-level components
inline mary_channel make_mary_channel(int K, double t, double quad_tol = 1e-9) {
    if (K < 1 || K > 3) throw std::invalid_argument("mary_channel: K in 1..3 supported");
    source_model model(K, t);
    error_distribution dist(model);
    gray_map gm{K};
    const int m = 1 << K;

    // pattern weights w[bits] = p(c | y); they sum to 1 for every y
    auto weights = [&](double y, std::vector<double>& w) {
        for (unsigned bits = 0; bits < static_cast<unsigned>(m); ++bits)
            w[bits] = dist.pdf(model.wrap(y - gm.symbol(bits)));
    };

    auto h2 = [](double p) {
        double h = 0.0;
        if (p > 0.0) h -= p * std::log2(p);
        if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
        return h;
    };

    mary_channel ch;
    ch.K = K;
    ch.t = t;
    std::vector<double> hc_sum(K, 0.0);
    std::vector<int> hc_cnt(K, 0);

    std::vector<double> breaks;
    for (int i = 0; i <= m; ++i) breaks.push_back(i);

    for (int k = 0; k < K; ++k) {
        for (unsigned S = 0; S < static_cast<unsigned>(1 << K); ++S) {
            if (S & (1u << k)) continue;
            int s_size = __builtin_popcount(S);
            auto integrand = [&](double y) {
                std::vector<double> w(m);
                weights(y, w);
                // group patterns by their bits inside S
                double h = 0.0;
                std::vector<double> g0(m, 0.0), gt(m, 0.0);
                for (unsigned bits = 0; bits < static_cast<unsigned>(m); ++bits) {
                    unsigned key = bits & S;
                    gt[key] += w[bits];
                    if (!(bits & (1u << k))) g0[key] += w[bits];
                }
                for (unsigned key = 0; key < static_cast<unsigned>(m); ++key) {
                    if ((key & ~S) || gt[key] <= 0.0) continue;
                    h += gt[key] * h2(g0[key] / gt[key]);
                }
                return h / m;
            };
            double hc = integrate_segmented(integrand, breaks, quad_tol);
            hc_sum[s_size] += hc;
            hc_cnt[s_size] += 1;
        }
    }
    ch.ic_k.resize(K);
    for (int kp = 0; kp < K; ++kp) {
        double hmean = hc_sum[kp] / hc_cnt[kp];
        ch.ic_k[kp] = 1.0 - hmean;
        ch.ic += ch.ic_k[kp] / K;
    }
    ch.gamma.resize(K);
    for (int kp = 0; kp < K; ++kp) ch.gamma[kp] = ch.ic_k[kp] / ch.ic;
    return ch;
}

// fraction of check-to-symbol inputs at level k' for symbol degree d
inline double alpha_kd(int K, int kp, int d, double x) {
    double xd = std::pow(x, d);
    double binom = 1.0;
    for (int i = 0; i < kp; ++i) binom = binom * (K - 1 - i) / (i + 1);
    return binom * std::pow(x, d * (kp + 1) - 1) * std::pow(1.0 - xd, K - 1 - kp);
}

inline double alpha_kd_deriv(int K, int kp, int d, double x) {
    // analytic d/dx of alpha_kd
    double binom = 1.0;
    for (int i = 0; i < kp; ++i) binom = binom * (K - 1 - i) / (i + 1);
    double xd = std::pow(x, d);
    int e = d * (kp + 1) - 1;
    int f = K - 1 - kp;
    double term1 = (e > 0) ? e * std::pow(x, e - 1) * std::pow(1.0 - xd, f) : 0.0;
    double term2 = (f > 0) ? std::pow(x, e) * f * std::pow(1.0 - xd, f - 1) * d * std::pow(x, d - 1)
                           : 0.0;
    return binom * (term1 - term2);
}

// ---------------------------------------------------------------------------
// decimation-pace transform used by pacing-aware optimization

// closed-form near-optimal pace x(l) = 1 - (1 - l/L)^{2(d_b-1)/d_b}
struct pace_transform {
    int d_b = 4;
    double L = 100.0;

    double exponent() const { return 2.0 * (d_b - 1) / d_b; }
    double x_of_l(double l) const {
        double u = std::clamp(1.0 - l / L, 0.0, 1.0);
        return 1.0 - std::pow(u, exponent());
    }
    double l_of_x(double x) const {
        return L * (1.0 - std::pow(1.0 - x, 1.0 / exponent()));
    }
    // next-iteration map and its derivative
    double p_plus(double x) const { return x_of_l(std::min(l_of_x(x) + 1.0, L)); }
    double p_plus_deriv(double x) const {
        double l = l_of_x(x);
        if (l + 1.0 >= L) return 0.0;
        double num = 1.0 - (l + 1.0) / L, den = 1.0 - l / L;
        return std::pow(num / den, exponent() - 1.0);
    }
    // replaces the (1-x) factor in the stability polynomial
    double q_of_x(double x) const {
        double pp = p_plus(x);
        double ppd = p_plus_deriv(x);
        if (ppd <= 0.0) return 0.0;
        return (1.0 - pp) / ppd;
    }
};

// ---------------------------------------------------------------------------
// degree-distribution optimization (linear programs)

struct optimize_options {
    std::vector<int> degrees;                      // candidate check degrees
    int grid_n = 1000;                             // stability-row sample count
    std::function<double(double)> row_weight;      // optional multiplier r(x)
    std::optional<pace_transform> pace;            // pacing-aware variant
    std::function<double(double)> g_inverse;       // for the degree-1 bound under pacing
    double drop_x_above = 1.0;                     // weighted rows near x=1 are unreliable
};

inline std::vector<int> default_degrees(int bound = 256) { return degree_set(1.1, bound); }

// inverse of the erasure-approximation bit-side transfer g(y) = y^{d_b - 1}
inline std::function<double(double)> ea_g_inverse(int d_b) {
    return [d_b](double z) { return std::pow(std::clamp(z, 0.0, 1.0), 1.0 / (d_b - 1)); };
}

namespace detail {

// coefficient of v_d in the (possibly pace-transformed) stability polynomial
inline double stability_coeff(int K, const std::vector<double>& gamma, int d_b, int d, double x,
                              double qx) {
    double s = 0.0;
    for (int kp = 0; kp < K; ++kp)
        s += gamma[kp] * (alpha_kd(K, kp, d, x) + qx * (d_b - 1) * alpha_kd_deriv(K, kp, d, x));
    return s;
}

struct dist_lp_solution {
    bool feasible = false;
    double s_max = 0.0;
    std::vector<int> degs;
    std::vector<double> v;
};

// Minimize max_x of the stability polynomial over edge fractions v_d.
// The grid makes a thousand nearly-degenerate rows, so the LP is posed
// transposed (one row per candidate degree) and the edge fractions are
// read back from the dual multipliers.
inline dist_lp_solution solve_dist_lp(int K, double R, int d_b, const std::vector<double>& gamma,
                                      const optimize_options& opt) {
    dist_lp_solution out;
    out.degs = opt.degrees.empty() ? default_degrees() : opt.degrees;
    bool paced = opt.pace.has_value();
    if (paced) {
        if (!opt.g_inverse) throw std::invalid_argument("pacing-aware LP needs g_inverse");
        if (out.degs.front() != 1) out.degs.insert(out.degs.begin(), 1);
    } else {
        // no degree-1 checks: the fixed-point trace must start at zero
        while (!out.degs.empty() && out.degs.front() == 1) out.degs.erase(out.degs.begin());
    }
    const int nd = static_cast<int>(out.degs.size());
    const double kappa = K / (R * d_b);

    // sample the stability rows
    std::vector<double> xs;
    for (int i = 0; i < opt.grid_n; ++i) {
        double x = static_cast<double>(i) / (opt.grid_n - 1);
        if (x > opt.drop_x_above) continue;
        if (opt.row_weight) {
            double w = opt.row_weight(x);
            if (!(w > 0.0) || !std::isfinite(w)) continue;  // undefined rows are dropped
        }
        xs.push_back(x);
    }
    const int N = static_cast<int>(xs.size());
    std::vector<double> k_coeff(static_cast<std::size_t>(N) * nd);
    for (int i = 0; i < N; ++i) {
        double x = xs[i];
        double w = opt.row_weight ? opt.row_weight(x) : 1.0;
        double qx = paced ? opt.pace->q_of_x(x) : (1.0 - x);
        for (int j = 0; j < nd; ++j)
            k_coeff[static_cast<std::size_t>(i) * nd + j] =
                w * stability_coeff(K, gamma, d_b, out.degs[j], x, qx);
    }
    double pace_bound = 0.0;
    bool pace_row = paced && out.degs.front() == 1;
    if (pace_row)
        pace_bound = (1.0 - opt.g_inverse(1.0 - opt.pace->p_plus(0.0))) / gamma[0];

    // transposed problem: variables u_i >= 0 (one per grid row), u_p for
    // the degree-1 bound, and the split free multipliers of the two
    // equality constraints
    lp_problem p;
    const int iu_p = N;
    const int imu = N + (pace_row ? 1 : 0);
    p.nvars = imu + 4;
    p.c.assign(p.nvars, 0.0);
    p.c[imu + 0] = -1.0;    // mu1+
    p.c[imu + 1] = 1.0;     // mu1-
    p.c[imu + 2] = -kappa;  // mu2+
    p.c[imu + 3] = kappa;   // mu2-
    for (int j = 0; j < nd; ++j) {
        lp_problem::row row;
        row.a.assign(p.nvars, 0.0);
        for (int i = 0; i < N; ++i) row.a[i] = -k_coeff[static_cast<std::size_t>(i) * nd + j];
        if (pace_row && out.degs[j] == 1) row.a[iu_p] = -1.0;
        row.a[imu + 0] = 1.0;
        row.a[imu + 1] = -1.0;
        row.a[imu + 2] = 1.0 / out.degs[j];
        row.a[imu + 3] = -1.0 / out.degs[j];
        row.r = lp_problem::rel::le;
        row.b = 0.0;
        p.rows.push_back(row);
    }
    {
        lp_problem::row row;  // normalization of the multipliers of s_max
        row.a.assign(p.nvars, 0.0);
        for (int i = 0; i < N; ++i) row.a[i] = 1.0;
        if (pace_row) row.a[iu_p] = pace_bound;
        row.r = lp_problem::rel::le;
        row.b = 1.0;
        p.rows.push_back(row);
    }

    auto sol = lp_solve(p);
    if (sol.st == lp_result::status::unbounded) return out;  // original problem infeasible
    if (sol.st != lp_result::status::optimal)
        throw std::runtime_error("solve_dist_lp: unexpected solver state");
    out.s_max = -sol.objective;
    out.v.assign(nd, 0.0);
    for (int j = 0; j < nd; ++j) out.v[j] = std::max(0.0, -sol.dual[j]);

    // sanity: the recovered fractions must satisfy the primal constraints
    double sv = 0.0, svd = 0.0;
    for (int j = 0; j < nd; ++j) {
        sv += out.v[j];
        svd += out.v[j] / out.degs[j];
    }
    if (std::abs(sv - 1.0) > 1e-6 || std::abs(svd - kappa) > 1e-6)
        throw std::runtime_error("solve_dist_lp: dual recovery failed");
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
        double row = 0.0;
        for (int j = 0; j < nd; ++j) row += k_coeff[static_cast<std::size_t>(i) * nd + j] * out.v[j];
        worst = std::max(worst, row);
    }
    if (worst > out.s_max + 1e-6)
        throw std::runtime_error("solve_dist_lp: primal-dual gap");
    out.feasible = true;
    return out;
}

} // namespace detail

struct optimize_result {
    degree_dist dist;
    double s_max = 0.0;
    double threshold = 0.0;  // 1 / s_max in the binary-equivalent scale
};

// binary (K = 1) threshold maximization; row_weight covers the
// density-corrected variant, pace the finite-iteration variant
inline optimize_result optimize_binary_ea(double R, int d_b, optimize_options opt = {}) {
    std::vector<double> gamma{1.0};
    auto sol = detail::solve_dist_lp(1, R, d_b, gamma, opt);
    if (!sol.feasible)
        throw std::runtime_error("optimize_binary_ea: LP infeasible for this (R, d_b)");
    optimize_result res;
    res.s_max = sol.s_max;
    res.threshold = 1.0 / sol.s_max;
    res.dist.K = 1;
    res.dist.R = R;
    res.dist.d_b = d_b;
    for (std::size_t j = 0; j < sol.degs.size(); ++j)
        if (sol.v[j] > 1e-9) res.dist.v.push_back({sol.degs[j], sol.v[j]});
    res.dist.threshold = res.threshold;
    res.dist.method = opt.pace ? (opt.row_weight ? "DE-PO" : "EA-PO")
                               : (opt.row_weight ? "DE" : "EA");
    if (opt.pace) res.dist.pace_l0 = static_cast<int>(opt.pace->L);
    res.dist.validate();
    return res;
}

// K >= 2: outer bisection on t, inner LP with component ratios frozen at
// the current t; returns the distribution found at the feasibility edge
struct mary_optimize_result {
    degree_dist dist;
    double t_thr = 0.0;
    double ic_thr = 0.0;  // per-component info at t_thr
};

inline mary_optimize_result optimize_mary_ea(double R, int d_b, int K,
                                             optimize_options opt = {},
                                             double t_tol = 1e-3) {
    auto feasible_at = [&](double t, degree_dist* out) -> bool {
        mary_channel ch = make_mary_channel(K, t);
        auto sol = detail::solve_dist_lp(K, R, d_b, ch.gamma, opt);
        if (!sol.feasible) return false;
        bool ok = sol.s_max <= 1.0 / ch.ic + 1e-9;
        if (ok && out) {
            out->K = K;
            out->R = R;
            out->d_b = d_b;
            out->v.clear();
            for (std::size_t j = 0; j < sol.degs.size(); ++j)
                if (sol.v[j] > 1e-9) out->v.push_back({sol.degs[j], sol.v[j]});
        }
        return ok;
    };

    double lo = 1e-4, hi = 64.0;
    mary_optimize_result res;
    if (!feasible_at(lo, &res.dist))
        throw std::runtime_error("optimize_mary_ea: infeasible even at t -> 0");
    while (feasible_at(hi, nullptr) && hi < 4096.0) hi *= 2.0;
    while (hi - lo > t_tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible_at(mid, &res.dist)) lo = mid;
        else hi = mid;
    }
    res.t_thr = lo;
    mary_channel ch = make_mary_channel(K, res.t_thr);
    res.ic_thr = ch.ic;
    res.dist.threshold = ch.ic;
    res.dist.method = opt.pace ? (opt.row_weight ? "DE-PO" : "EA-PO")
                               : (opt.row_weight ? "DE" : "EA");
    if (opt.pace) res.dist.pace_l0 = static_cast<int>(opt.pace->L);
    res.dist.validate();
    return res;
}

} // namespace ldgmq
