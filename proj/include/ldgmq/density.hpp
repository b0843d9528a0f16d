#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ldgmq/message.hpp"

namespace ldgmq {

// Uniform L-value grid: odd bin count, centers k*delta for k in
// [-half, half], so sums of centers land exactly on grid points.
struct density_grid {
    double l_max = 25.0;
    int half = 1024;

    int bins() const { return 2 * half + 1; }
    double delta() const { return l_max / half; }
    double center(int idx) const { return (idx - half) * delta(); }
    bool operator==(const density_grid& o) const {
        return l_max == o.l_max && half == o.half;
    }
};

// Probability density over quantized L-values plus two saturation masses
// representing exactly-sure messages.
struct quantized_density {
    density_grid grid;
    std::vector<double> bin;  // size grid.bins()
    double sat_pos = 0.0;     // sure-0, L = +inf
    double sat_neg = 0.0;     // sure-1, L = -inf

    explicit quantized_density(density_grid g = {}) : grid(g), bin(g.bins(), 0.0) {}

    double interior_mass() const {
        double s = 0.0;
        for (double v : bin) s += v;
        return s;
    }
    double mass() const { return interior_mass() + sat_pos + sat_neg; }

    void scale(double a) {
        for (double& v : bin) v *= a;
        sat_pos *= a;
        sat_neg *= a;
    }
    void normalize() {
        double m = mass();
        if (m > 0) scale(1.0 / m);
    }
    void accumulate(const quantized_density& o, double w) {
        for (std::size_t i = 0; i < bin.size(); ++i) bin[i] += w * o.bin[i];
        sat_pos += w * o.sat_pos;
        sat_neg += w * o.sat_neg;
    }

    static quantized_density star(density_grid g) {
        quantized_density d(g);
        d.bin[g.half] = 1.0;
        return d;
    }
    static quantized_density sure0(density_grid g) {
        quantized_density d(g);
        d.sat_pos = 1.0;
        return d;
    }
    // erasure-like mixture: known with probability info, star otherwise
    static quantized_density erasure_like(density_grid g, double info) {
        quantized_density d(g);
        d.sat_pos = info;
        d.bin[g.half] = 1.0 - info;
        return d;
    }

    // deposit mass at L-value, split between adjacent bins
    void add_mass(double l, double w) {
        double dl = grid.delta();
        double x = l / dl + grid.half;
        if (x <= 0.0) { bin.front() += w; return; }
        if (x >= grid.bins() - 1) { bin.back() += w; return; }
        int k = static_cast<int>(x);
        double f = x - k;
        bin[k] += w * (1.0 - f);
        bin[k + 1] += w * f;
    }
};

namespace detail {

struct fftw_free_deleter {
    void operator()(void* p) const { fftw_free(p); }
};

// cached real FFT of one size
class real_fft {
public:
    explicit real_fft(int n) : n_(n) {
        re_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
        cx_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
        fwd_ = fftw_plan_dft_r2c_1d(n, re_, cx_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(n, cx_, re_, FFTW_ESTIMATE);
    }
    ~real_fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(re_);
        fftw_free(cx_);
    }
    real_fft(const real_fft&) = delete;
    real_fft& operator=(const real_fft&) = delete;

    int size() const { return n_; }
    double* real_buf() { return re_; }
    std::complex<double>* cplx_buf() { return reinterpret_cast<std::complex<double>*>(cx_); }
    int cplx_size() const { return n_ / 2 + 1; }
    void forward() { fftw_execute(fwd_); }
    void inverse() { fftw_execute(inv_); }

private:
    int n_;
    double* re_;
    fftw_complex* cx_;
    fftw_plan fwd_, inv_;
};

} // namespace detail

// Shared machinery for density operations on one grid: the pairwise
// check-combine lookup table and FFT plans for variable-side convolution.
class density_ops {
public:
    explicit density_ops(density_grid g) : grid_(g) {
        const int B = grid_.bins();
        h_bits_.resize(B);
        for (int i = 0; i < B; ++i)
            h_bits_[i] = entropy(message::from_l(grid_.center(i)));
        build_cn_table();
    }

    const density_grid& grid() const { return grid_; }

    double mi(const quantized_density& d) const {
        double h = 0.0;
        for (std::size_t i = 0; i < d.bin.size(); ++i) h += d.bin[i] * h_bits_[i];
        return 1.0 - h;
    }

    // check-node combine of two independent message densities
    quantized_density cn_combine(const quantized_density& p, const quantized_density& q) const {
        check_grid(p); check_grid(q);
        const int B = grid_.bins();
        quantized_density out(grid_);
        double* o = out.bin.data();
        // interior x interior via the lookup table
        for (int i = 0; i < B; ++i) {
            double pi = p.bin[i];
            if (pi < 1e-300) continue;
            const std::int32_t* ki = &cn_idx_[static_cast<std::size_t>(i) * B];
            const float* wi = &cn_wgt_[static_cast<std::size_t>(i) * B];
            const double* qb = q.bin.data();
            for (int j = 0; j < B; ++j) {
                double w = pi * qb[j];
                int k = ki[j];
                double a = wi[j];
                o[k] += w * a;
                o[k + 1] += w * (1.0 - a);
            }
        }
        // sure-0 acts as identity, sure-1 reflects the sign
        if (p.sat_pos > 0) for (int j = 0; j < B; ++j) o[j] += p.sat_pos * q.bin[j];
        if (p.sat_neg > 0) for (int j = 0; j < B; ++j) o[B - 1 - j] += p.sat_neg * q.bin[j];
        if (q.sat_pos > 0) for (int i = 0; i < B; ++i) o[i] += q.sat_pos * p.bin[i];
        if (q.sat_neg > 0) for (int i = 0; i < B; ++i) o[B - 1 - i] += q.sat_neg * p.bin[i];
        out.sat_pos = p.sat_pos * q.sat_pos + p.sat_neg * q.sat_neg;
        out.sat_neg = p.sat_pos * q.sat_neg + p.sat_neg * q.sat_pos;
        return out;
    }

    // exponent-fold check combine via repeated squaring
    quantized_density cn_power(const quantized_density& p, int e) const {
        if (e < 1) throw std::invalid_argument("cn_power: exponent must be >= 1");
        bool have = false;
        quantized_density sq = p;
        quantized_density result(grid_);
        for (int bit = e; bit; bit >>= 1) {
            if (bit & 1) {
                if (!have) { result = sq; have = true; }
                else result = cn_combine(result, sq);
            }
            if (bit > 1) sq = cn_combine(sq, sq);
        }
        return result;
    }

    // variable-node convolution: density of the sum of e independent
    // L-values; tails beyond the grid saturate, opposite sure draws
    // cancel to L = 0
    quantized_density vn_convolve_power(const quantized_density& p, int e) {
        check_grid(p);
        if (e < 1) throw std::invalid_argument("vn_convolve_power: exponent must be >= 1");
        if (e == 1) return p;
        const int B = grid_.bins();
        const int out_len = e * (B - 1) + 1;
        detail::real_fft& fft = plan_for(out_len);
        const int N = fft.size();

        double* re = fft.real_buf();
        std::fill(re, re + N, 0.0);
        std::copy(p.bin.begin(), p.bin.end(), re);
        fft.forward();
        std::complex<double>* cx = fft.cplx_buf();
        for (int i = 0; i < fft.cplx_size(); ++i) {
            std::complex<double> base = cx[i], acc(1.0, 0.0);
            for (int k = 0; k < e; ++k) acc *= base;
            cx[i] = acc;
        }
        fft.inverse();

        quantized_density out(grid_);
        const double scale = 1.0 / N;
        // center index of output point k (k in [0, out_len)): k - e*half
        for (int k = 0; k < out_len; ++k) {
            double w = re[k] * scale;
            if (w <= 0) continue;  // roundoff dust
            int c = k - e * grid_.half;
            if (c < -grid_.half) out.sat_neg += w;
            else if (c > grid_.half) out.sat_pos += w;
            else out.bin[c + grid_.half] += w;
        }
        double w_int = p.interior_mass();
        double all_int = ipow(w_int, e);
        double no_neg = ipow(w_int + p.sat_pos, e);
        double no_pos = ipow(w_int + p.sat_neg, e);
        double total = ipow(w_int + p.sat_pos + p.sat_neg, e);
        out.sat_pos += no_neg - all_int;
        out.sat_neg += no_pos - all_int;
        out.bin[grid_.half] += total - no_neg - no_pos + all_int;  // +inf meets -inf
        return out;
    }

    quantized_density vn_convolve(const quantized_density& p, const quantized_density& q) {
        check_grid(p); check_grid(q);
        if (&p == &q) return vn_convolve_power(p, 2);
        const int B = grid_.bins();
        const int out_len = 2 * B - 1;
        detail::real_fft& fft = plan_for(out_len);
        const int N = fft.size();
        std::vector<std::complex<double>> pf(fft.cplx_size());

        double* re = fft.real_buf();
        std::fill(re, re + N, 0.0);
        std::copy(p.bin.begin(), p.bin.end(), re);
        fft.forward();
        std::copy(fft.cplx_buf(), fft.cplx_buf() + fft.cplx_size(), pf.begin());

        std::fill(re, re + N, 0.0);
        std::copy(q.bin.begin(), q.bin.end(), re);
        fft.forward();
        std::complex<double>* cx = fft.cplx_buf();
        for (int i = 0; i < fft.cplx_size(); ++i) cx[i] *= pf[i];
        fft.inverse();

        quantized_density out(grid_);
        const double scale = 1.0 / N;
        for (int k = 0; k < out_len; ++k) {
            double w = re[k] * scale;
            if (w <= 0) continue;
            int c = k - 2 * grid_.half;
            if (c < -grid_.half) out.sat_neg += w;
            else if (c > grid_.half) out.sat_pos += w;
            else out.bin[c + grid_.half] += w;
        }
        double wp = p.interior_mass(), wq = q.interior_mass();
        out.sat_pos += p.sat_pos * (wq + q.sat_pos) + q.sat_pos * wp;
        out.sat_neg += p.sat_neg * (wq + q.sat_neg) + q.sat_neg * wp;
        out.bin[grid_.half] += p.sat_pos * q.sat_neg + p.sat_neg * q.sat_pos;
        return out;
    }

    // project onto densities satisfying p(-L) = exp(-L) p(L) exactly,
    // preserving the mass of each (L, -L) pair
    void symmetrize(quantized_density& d) const {
        const int B = grid_.bins();
        for (int i = grid_.half + 1; i < B; ++i) {
            double l = grid_.center(i);
            double m = d.bin[i] + d.bin[B - 1 - i];
            double w = 1.0 / (1.0 + std::exp(-l));
            d.bin[i] = m * w;
            d.bin[B - 1 - i] = m * (1.0 - w);
        }
    }

    // max over bin pairs of |p(-L) - exp(-L) p(L)| normalized by bin width;
    // zero for densities consistent with an all-zero reference
    double symmetry_violation(const quantized_density& d) const {
        const int B = grid_.bins();
        double worst = 0.0;
        for (int i = 0; i < B; ++i) {
            double l = grid_.center(i);
            if (l <= 0) continue;
            double mirrored = d.bin[B - 1 - i];
            double expect = std::exp(-l) * d.bin[i];
            worst = std::max(worst, std::abs(mirrored - expect));
        }
        return worst;
    }

private:
    static double ipow(double x, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    }

    void check_grid(const quantized_density& d) const {
        if (!(d.grid == grid_)) throw std::invalid_argument("density grid mismatch");
    }

    static double cn_l(double a, double b) {
        // 2 atanh(tanh(a/2) tanh(b/2)) = ln(1+e^{a+b}) - ln(e^a + e^b),
        // in a form stable for large |L|
        double s = a + b, d = a - b;
        return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)))
               - std::max(a, b) - std::log1p(std::exp(-std::abs(d)));
    }

    void build_cn_table() {
        const int B = grid_.bins();
        cn_idx_.resize(static_cast<std::size_t>(B) * B);
        cn_wgt_.resize(static_cast<std::size_t>(B) * B);
        const double dl = grid_.delta();
        for (int i = 0; i < B; ++i) {
            double li = grid_.center(i);
            for (int j = 0; j < B; ++j) {
                double v = cn_l(li, grid_.center(j));
                double x = v / dl + grid_.half;
                if (x < 0) x = 0;
                if (x > B - 1) x = B - 1;
                int k = static_cast<int>(x);
                if (k >= B - 1) k = B - 2;
                // split so that E[exp(-L)] is exact; mirrored deposits then
                // stay consistent and symmetric densities remain symmetric
                double c0 = grid_.center(k), c1 = c0 + dl;
                double w = (std::exp(-v) - std::exp(-c1)) / (std::exp(-c0) - std::exp(-c1));
                cn_idx_[static_cast<std::size_t>(i) * B + j] = k;
                cn_wgt_[static_cast<std::size_t>(i) * B + j] =
                    static_cast<float>(std::clamp(w, 0.0, 1.0));
            }
        }
    }

    detail::real_fft& plan_for(int min_len) {
        int n = 1;
        while (n < min_len) n <<= 1;
        for (auto& p : plans_)
            if (p->size() == n) return *p;
        plans_.push_back(std::make_unique<detail::real_fft>(n));
        return *plans_.back();
    }

    density_grid grid_;
    std::vector<double> h_bits_;
    std::vector<std::int32_t> cn_idx_;
    std::vector<float> cn_wgt_;
    std::vector<std::unique_ptr<detail::real_fft>> plans_;
};

} // namespace ldgmq
