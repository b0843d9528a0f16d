#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldgmq {

// Probability tuple (mu0, mu1) over {0,1}, kept normalized.  Equivalent
// L-value is ln(mu0/mu1); +inf for sure-0, -inf for sure-1.
struct message {
    double p0 = 0.5;
    double p1 = 0.5;

    static message sure0() { return {1.0, 0.0}; }
    static message sure1() { return {0.0, 1.0}; }
    static message star() { return {0.5, 0.5}; }
    static message from_l(double l) {
        if (std::isinf(l)) return l > 0 ? sure0() : sure1();
        double e = std::exp(-std::abs(l));
        double big = 1.0 / (1.0 + e), small = e / (1.0 + e);
        return l >= 0 ? message{big, small} : message{small, big};
    }

    double l_value() const {
        if (p1 == 0.0) return std::numeric_limits<double>::infinity();
        if (p0 == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(p0 / p1);
    }
    bool is_sure0() const { return p1 == 0.0; }
    bool is_sure1() const { return p0 == 0.0; }

    message normalized() const {
        double s = p0 + p1;
        return {p0 / s, p1 / s};
    }
};

// binary entropy of the tuple, in bits
inline double entropy(const message& m) {
    double h = 0.0;
    if (m.p0 > 0.0) h -= m.p0 * std::log2(m.p0);
    if (m.p1 > 0.0) h -= m.p1 * std::log2(m.p1);
    return h;
}

inline bool vn_contradicts(const message& a, const message& b) {
    return (a.is_sure0() && b.is_sure1()) || (a.is_sure1() && b.is_sure0());
}

// variable-node combine: componentwise product, normalized.  Combining
// opposite sure messages has no normalizable result; callers that care
// test vn_contradicts first, otherwise the result degrades to star.
inline message vn_combine(const message& a, const message& b) {
    double q0 = a.p0 * b.p0, q1 = a.p1 * b.p1;
    double s = q0 + q1;
    if (s <= 0.0) return message::star();
    return {q0 / s, q1 / s};
}

// check-node combine
inline message cn_combine(const message& a, const message& b) {
    return {a.p0 * b.p0 + a.p1 * b.p1, a.p0 * b.p1 + a.p1 * b.p0};
}

// BP clips soft messages to |L| <= l_max so tuples never reach exact 0/1
// except by decimation.
inline constexpr double bp_l_max = 25.0;

inline message clip(const message& m, double l_max = bp_l_max) {
    double pmin = 1.0 / (1.0 + std::exp(l_max));
    double p0 = std::clamp(m.p0, pmin, 1.0 - pmin);
    double p1 = 1.0 - p0;
    return {p0, p1};
}

} // namespace ldgmq
