#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgmq/rng.hpp"

namespace ldgmq {

// exponential-like degree ladder: d1 = 2, d_{k+1} = ceil(beta * d_k)
inline std::vector<int> degree_set(double beta, int d_max_bound) {
    if (!(beta > 1.0)) throw std::invalid_argument("degree_set: beta must exceed 1");
    std::vector<int> out;
    int d = 2;
    while (d <= d_max_bound) {
        out.push_back(d);
        int next = static_cast<int>(std::ceil(beta * d));
        if (next <= d) next = d + 1;
        d = next;
    }
    return out;
}

// binary-reflected Gray labeling of the m = 2^K reproduction values;
// bit k of the pattern is the (k+1)-th coded bit
struct gray_map {
    int K = 1;

    // pattern of K bits -> symbol value
    int symbol(unsigned bits) const {
        unsigned v = bits;
        for (int shift = 1; shift < K; shift <<= 1) v ^= v >> shift;
        return static_cast<int>(v);
    }
    // symbol value -> pattern of K bits
    unsigned bits(int value) const {
        unsigned v = static_cast<unsigned>(value);
        return v ^ (v >> 1);
    }
};

// Right-regular generator ensemble: every information (b) node has degree
// d_b; v maps check-side degree d to its edge fraction v_d.
struct degree_dist {
    int K = 1;
    double R = 0.5;
    int d_b = 4;
    std::vector<std::pair<int, double>> v;  // (degree, edge fraction), sorted
    double threshold = 0.0;                 // largest supported prior info per bit
    std::string method;                     // optimizer that produced it
    int pace_l0 = 0;                        // nonzero when pacing-aware

    double edge_fraction_sum() const {
        double s = 0.0;
        for (auto& [d, vd] : v) s += vd;
        return s;
    }
    double inverse_degree_sum() const {
        double s = 0.0;
        for (auto& [d, vd] : v) s += vd / d;
        return s;
    }
    int max_degree() const {
        int m = 0;
        for (auto& [d, vd] : v)
            if (vd > 1e-9) m = std::max(m, d);
        return m;
    }
    void validate() const {
        if (K < 1 || d_b < 1 || !(R > 0.0) || !(R < K))
            throw std::invalid_argument("degree_dist: bad K/R/d_b");
        if (std::abs(edge_fraction_sum() - 1.0) > 1e-6)
            throw std::invalid_argument("degree_dist: edge fractions must sum to 1");
        if (std::abs(inverse_degree_sum() - K / (R * d_b)) > 1e-6)
            throw std::invalid_argument("degree_dist: rate constraint violated");
        for (auto& [d, vd] : v)
            if (d < 1 || vd < -1e-12)
                throw std::invalid_argument("degree_dist: bad entry");
    }

    static degree_dist regular(int d_b, int d_c, int K = 1) {
        degree_dist dd;
        dd.K = K;
        dd.d_b = d_b;
        dd.R = static_cast<double>(K) * d_c / d_b;
        dd.v = {{d_c, 1.0}};
        dd.method = "regular";
        return dd;
    }
};

// Sampled bipartite generator graph.  For K >= 2, the K check nodes under
// one symbol node share a common degree.
class ldgm_code {
public:
    int n = 0;     // source symbols
    int n_b = 0;   // information bits
    int K = 1;
    int d_b = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<int, double>> dist_v;  // provenance
    std::vector<std::vector<std::int32_t>> rows;  // per-b sorted check indices

    int n_c() const { return K * n; }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (auto& r : rows) e += r.size();
        return e;
    }

    // check-side adjacency (built once on demand)
    const std::vector<std::vector<std::int32_t>>& cols() const {
        if (cols_.empty() && n_c() > 0) {
            cols_.resize(n_c());
            for (int i = 0; i < n_b; ++i)
                for (auto j : rows[i]) cols_[j].push_back(i);
        }
        return cols_;
    }

    // c = b G over GF(2)
    std::vector<std::uint8_t> encode_bits(const std::vector<std::uint8_t>& b) const {
        if (static_cast<int>(b.size()) != n_b)
            throw std::invalid_argument("encode: information length mismatch");
        std::vector<std::uint8_t> c(n_c(), 0);
        for (int i = 0; i < n_b; ++i)
            if (b[i])
                for (auto j : rows[i]) c[j] ^= 1;
        return c;
    }

    // symbols u_j = gray(c_{Kj}, .., c_{Kj+K-1})
    std::vector<int> to_symbols(const std::vector<std::uint8_t>& c) const {
        gray_map gm{K};
        std::vector<int> u(n);
        for (int j = 0; j < n; ++j) {
            unsigned bits = 0;
            for (int k = 0; k < K; ++k) bits |= static_cast<unsigned>(c[K * j + k]) << k;
            u[j] = gm.symbol(bits);
        }
        return u;
    }

private:
    mutable std::vector<std::vector<std::int32_t>> cols_;
};

namespace detail {

// node fractions by largest remainder; leftover stubs go to the top class
inline std::vector<int> symbol_degrees(const degree_dist& dist, int n, int target_stubs) {
    struct cls { int d; double nodes_exact; int nodes; double frac; };
    std::vector<cls> classes;
    for (auto& [d, vd] : dist.v) {
        if (vd <= 1e-12) continue;
        double w = vd * dist.R * dist.d_b / (dist.K * d);  // node fraction
        classes.push_back({d, w * n, 0, 0.0});
    }
    int assigned = 0;
    for (auto& c : classes) {
        c.nodes = static_cast<int>(c.nodes_exact);
        c.frac = c.nodes_exact - c.nodes;
        assigned += c.nodes;
    }
    std::vector<int> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return classes[a].frac > classes[b].frac;
    });
    for (int k = 0; assigned < n; ++k, ++assigned) classes[order[k % order.size()]].nodes++;
    for (int k = 0; assigned > n; ++k) {
        auto& c = classes[order[order.size() - 1 - (k % order.size())]];
        if (c.nodes > 0) { c.nodes--; assigned--; }
    }

    std::vector<int> deg;
    deg.reserve(n);
    for (auto& c : classes)
        for (int i = 0; i < c.nodes; ++i) deg.push_back(c.d);
    std::sort(deg.begin(), deg.end());
    while (static_cast<int>(deg.size()) < n) deg.push_back(classes.back().d);
    deg.resize(n);

    long stubs = 0;
    for (int d : deg) stubs += static_cast<long>(dist.K) * d;
    long diff = target_stubs - stubs;
    // adjust within the highest-degree class, one symbol node at a time
    for (std::size_t k = deg.size(); diff != 0;) {
        k = (k == 0) ? deg.size() - 1 : k - 1;
        if (diff > 0) { deg[k]++; diff -= dist.K; }
        else if (deg[k] > 1) { deg[k]--; diff += dist.K; }
        if (k == 0 && diff < 0) break;  // cannot trim further
    }
    std::sort(deg.begin(), deg.end());
    return deg;
}

} // namespace detail

// Random edge assignment from the ensemble; parallel edges are removed in
// pairs.  Codes that leave any information node with degree < 2 are
// resampled with a perturbed stream.
inline ldgm_code sample_code(const degree_dist& dist, int n, std::uint64_t seed) {
    dist.validate();
    ldgm_code code;
    code.n = n;
    code.n_b = static_cast<int>(std::lround(n * dist.R));
    code.K = dist.K;
    code.d_b = dist.d_b;
    code.seed = seed;
    code.dist_v = dist.v;
    const long target_stubs = static_cast<long>(code.n_b) * dist.d_b;
    if (target_stubs <= 0 || code.n_b <= 0)
        throw std::invalid_argument("sample_code: empty code");

    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > 64) throw std::runtime_error("sample_code: cannot realize degree demands");
        auto udeg = detail::symbol_degrees(dist, n, static_cast<int>(target_stubs));
        std::vector<std::int32_t> cstubs;
        cstubs.reserve(target_stubs);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < dist.K; ++k)
                for (int s = 0; s < udeg[j]; ++s) cstubs.push_back(dist.K * j + k);
        if (static_cast<long>(cstubs.size()) != target_stubs)
            throw std::runtime_error("sample_code: stub accounting failed");

        philox_rng rng = derive_rng(seed, rng_stream::code_sample, attempt);
        for (std::size_t i = cstubs.size(); i > 1; --i)
            std::swap(cstubs[i - 1], cstubs[rng.below(i)]);

        code.rows.assign(code.n_b, {});
        std::size_t pos = 0;
        for (int i = 0; i < code.n_b; ++i) {
            auto& row = code.rows[i];
            row.assign(cstubs.begin() + pos, cstubs.begin() + pos + dist.d_b);
            pos += dist.d_b;
            std::sort(row.begin(), row.end());
            // drop duplicate (b,c) pairs two at a time
            std::vector<std::int32_t> kept;
            kept.reserve(row.size());
            for (std::size_t a = 0; a < row.size();) {
                std::size_t b = a;
                while (b < row.size() && row[b] == row[a]) ++b;
                if ((b - a) % 2) kept.push_back(row[a]);
                a = b;
            }
            row = std::move(kept);
        }
        bool ok = true;
        for (auto& r : code.rows)
            if (static_cast<int>(r.size()) < 2) { ok = false; break; }
        if (ok) break;
    }
    return code;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace ldgmq
