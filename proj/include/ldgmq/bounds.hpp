#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldgmq/quadrature.hpp"

namespace ldgmq {

inline constexpr double pi = 3.14159265358979323846;

// Uniform source on [0,m) quantized against a period-m codebook; t is the
// exponent weighting squared error.  m = 2^K and the error interval is
// I = [-m/2, m/2).
struct source_model {
    int K = 1;
    double t = 1.0;

    source_model() = default;
    source_model(int K_, double t_) : K(K_), t(t_) {
        if (K < 1 || K > 16) throw std::invalid_argument("source_model: K out of range");
        if (!(t >= 0.0)) throw std::invalid_argument("source_model: t must be >= 0");
    }

    int m() const { return 1 << K; }
    double half_period() const { return 0.5 * m(); }

    // reduce into I = [-m/2, m/2)
    double wrap(double z) const {
        double mm = m();
        double r = std::fmod(z + half_period(), mm);
        if (r < 0) r += mm;
        return r - half_period();
    }
};

// Error density p(z) = exp(-t z^2) / Q(z mod [0,1)) on I, where
// Q(y~) = sum_a exp(-t ((y~+a) mod I)^2).  ln Q is tabulated on a uniform
// grid with periodic cubic interpolation; the table is only an evaluation
// cache, exact values are cheap to recompute.
class error_distribution {
public:
    static constexpr int table_size = 4096;

    explicit error_distribution(source_model model) : model_(model) {
        ln_q_.resize(table_size);
        for (int i = 0; i < table_size; ++i)
            ln_q_[i] = std::log(q_exact(static_cast<double>(i) / table_size));
    }

    const source_model& model() const { return model_; }

    double q_exact(double ytilde) const {
        double s = 0.0;
        for (int a = 0; a < model_.m(); ++a) {
            double d = model_.wrap(ytilde + a);
            s += std::exp(-model_.t * d * d);
        }
        return s;
    }

    // periodic Catmull-Rom on the ln Q table
    double ln_q(double ytilde) const {
        double u = ytilde - std::floor(ytilde);
        double x = u * table_size;
        int i1 = static_cast<int>(x);
        double f = x - i1;
        int i0 = (i1 + table_size - 1) & (table_size - 1);
        int i2 = (i1 + 1) & (table_size - 1);
        int i3 = (i1 + 2) & (table_size - 1);
        i1 &= (table_size - 1);
        double p0 = ln_q_[i0], p1 = ln_q_[i1], p2 = ln_q_[i2], p3 = ln_q_[i3];
        double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        double c = -0.5 * p0 + 0.5 * p2;
        return ((a * f + b) * f + c) * f + p1;
    }

    double pdf(double z) const {
        return std::exp(-model_.t * z * z - ln_q(z));
    }

private:
    source_model model_;
    std::vector<double> ln_q_;
};

namespace detail {
// integration breakpoints: pdf has derivative kinks at integer z
inline std::vector<double> integer_breaks(const source_model& m) {
    std::vector<double> b;
    for (int k = -m.m() / 2; k <= m.m() / 2; ++k) b.push_back(k);
    return b;
}
}

// entropy of p_z in bits
inline double entropy_bits(const source_model& model, double abs_tol = 1e-11) {
    if (model.t == 0.0) return model.K;  // uniform on I
    error_distribution d(model);
    constexpr double inv_ln2 = 1.4426950408889634074;
    auto f = [&](double z) {
        double lp = -model.t * z * z - d.ln_q(z);
        return -std::exp(lp) * lp * inv_ln2;
    };
    return integrate_segmented(f, detail::integer_breaks(model), abs_tol);
}

// mean squared error of p_z
inline double mean_power(const source_model& model, double abs_tol = 1e-11) {
    error_distribution d(model);
    auto f = [&](double z) { return z * z * d.pdf(z); };
    return integrate_segmented(f, detail::integer_breaks(model), abs_tol);
}

// entropy of a Gaussian with variance P, in bits
inline double gaussian_entropy_bits(double P) {
    return 0.5 * std::log2(2.0 * pi * std::exp(1.0) * P);
}

// t such that entropy H_t = K - R; H_t is strictly decreasing in t
inline double solve_t0(double R, int K, double tol = 1e-8) {
    if (!(R > 0.0) || !(R < K)) throw std::invalid_argument("solve_t0: need 0 < R < K");
    double target = K - R;
    double lo = 1e-6, hi = 256.0;
    source_model ml(K, lo), mh(K, hi);
    if (entropy_bits(ml) < target || entropy_bits(mh) > target)
        throw std::runtime_error("solve_t0: target entropy out of bracket");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double h = entropy_bits(source_model(K, mid));
        if (h > target) lo = mid; else hi = mid;
        if (std::abs(h - target) <= tol && (hi - lo) < 1e-6 * mid) break;
    }
    return 0.5 * (lo + hi);
}

// power of the entropy-matched Gaussian at rate R: (1/2*pi*e) (m/2^R)^2
inline double ideal_power(double R, int K) {
    double ratio = std::ldexp(1.0, K) / std::exp2(R);
    return ratio * ratio / (2.0 * pi * std::exp(1.0));
}

// shaping loss of the best rate-R period-m random codebook, in dB
inline double random_coding_loss(double R, int K) {
    double t0 = solve_t0(R, K);
    double pt = mean_power(source_model(K, t0));
    return 10.0 * std::log10(pt / ideal_power(R, K));
}

// per-symbol prior over the m reproduction values; component u is
// p_z((y-u) mod I), and the components sum to 1 by construction
inline std::vector<double> prior_for_symbol(double y, const error_distribution& dist) {
    const auto& ml = dist.model();
    std::vector<double> p(ml.m());
    double sum = 0.0;
    for (int u = 0; u < ml.m(); ++u) {
        p[u] = dist.pdf(ml.wrap(y - u));
        sum += p[u];
    }
    for (auto& v : p) v /= sum;
    return p;
}

struct shaping_report {
    double rate = 0.0;
    double sigma2 = 0.0;
    double density_exponent = 0.0;  // rho^{2/n} = (2^R / m)^2
    double loss_db = 0.0;
};

// loss of a measured MSE against the sphere bound G* = 1/(2*pi*e)
inline shaping_report shaping_loss(double sigma2, double R, int K) {
    shaping_report r;
    r.rate = R;
    r.sigma2 = sigma2;
    double ratio = std::exp2(R) / std::ldexp(1.0, K);
    r.density_exponent = ratio * ratio;
    r.loss_db = 10.0 * std::log10(sigma2 * r.density_exponent * 2.0 * pi * std::exp(1.0));
    return r;
}

} // namespace ldgmq
