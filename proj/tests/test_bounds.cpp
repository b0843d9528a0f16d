#include <doctest.h>

#include <cmath>

#include "ldgmq/bounds.hpp"
#include "ldgmq/quadrature.hpp"
#include "ldgmq/rng.hpp"

using namespace ldgmq;

TEST_CASE("quadrature basics") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0)
          == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("error density normalizes") {
    for (auto [K, t] : {std::pair{1, 0.5}, {1, 4.0}, {2, 2.0}, {2, 17.0}, {3, 1.0}}) {
        source_model m(K, t);
        error_distribution d(m);
        double mass = integrate_segmented([&](double z) { return d.pdf(z); },
                                          detail::integer_breaks(m), 1e-12);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("entropy limits and reference points") {
    // zero-temperature limit: uniform on [-1,1)
    CHECK(entropy_bits(source_model(1, 1e-9)) == doctest::Approx(1.0).epsilon(1e-6));
    // rate 0.4461 b/s sits at t = 4
    CHECK(entropy_bits(source_model(1, 4.0)) == doctest::Approx(1.0 - 0.4461).epsilon(2e-4));
    // 4-ary rate 0.9531 b/s sits near t = 2
    CHECK(entropy_bits(source_model(2, 2.0)) == doctest::Approx(2.0 - 0.9531).epsilon(2e-4));
}

TEST_CASE("power at t = 0 and against sampling") {
    CHECK(mean_power(source_model(1, 0.0)) == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(mean_power(source_model(2, 0.0)) == doctest::Approx(4.0 / 3).epsilon(1e-9));

    // rejection-sampling oracle at K=1, t=4
    source_model m(1, 4.0);
    error_distribution d(m);
    philox_rng rng(7, rng_stream::test);
    const int N = 1000000;
    double peak = d.pdf(0.0);
    double sum = 0.0, sumsq = 0.0;
    int kept = 0;
    while (kept < N) {
        double z = -1.0 + 2.0 * rng.uniform();
        if (rng.uniform() * peak <= d.pdf(z)) {
            sum += z * z;
            sumsq += z * z * z * z;
            ++kept;
        }
    }
    double mc = sum / N;
    double sigma = std::sqrt((sumsq / N - mc * mc) / N);
    CHECK(std::abs(mean_power(m) - mc) < 3.0 * sigma + 1e-12);
}

TEST_CASE("t0 solve brackets the paper operating points") {
    CHECK(solve_t0(0.4461, 1) == doctest::Approx(4.0).epsilon(0.01 / 4.0));
    CHECK(solve_t0(0.9531, 2) == doctest::Approx(2.0).epsilon(0.02));
    // entropy is monotone decreasing in t
    double prev = 1e9;
    for (int i = 0; i <= 100; ++i) {
        double t = 0.02 + (64.0 - 0.02) * i / 100.0;
        double h = entropy_bits(source_model(1, t), 1e-10);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("power is monotone decreasing in t") {
    double prev = 1e9;
    for (int i = 0; i <= 100; ++i) {
        double t = 0.02 + (64.0 - 0.02) * i / 100.0;
        double p = mean_power(source_model(1, t), 1e-11);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("random-coding losses") {
    CHECK(random_coding_loss(0.4130, 1) == doctest::Approx(0.0945).epsilon(0.0005 / 0.0945));
    CHECK(random_coding_loss(0.4461, 1) == doctest::Approx(0.0976).epsilon(0.0005 / 0.0976));
    CHECK(random_coding_loss(0.9531, 2) == doctest::Approx(0.0010).scale(1).epsilon(0.5));
    // nonnegative across rates
    for (double R : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CHECK(random_coding_loss(R, 1) >= 0.0);
        CHECK(random_coding_loss(2 * R, 2) >= 0.0);
    }
    CHECK_THROWS(random_coding_loss(0.0, 1));
    CHECK_THROWS(random_coding_loss(1.0, 1));
}

TEST_CASE("per-symbol priors") {
    source_model m(1, 4.0);
    error_distribution d(m);

    auto p = prior_for_symbol(0.5, d);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));

    // cross-check against direct quadrature-normalized values at y = 0
    auto q = prior_for_symbol(0.0, d);
    double a = d.pdf(0.0), b = d.pdf(-1.0);
    CHECK(q[0] == doctest::Approx(a / (a + b)).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(b / (a + b)).epsilon(1e-9));

    // large t concentrates the prior on the nearest symbol
    source_model sharp(2, 200.0);
    error_distribution ds(sharp);
    auto r = prior_for_symbol(2.0, ds);
    CHECK(r[2] > 1.0 - 1e-6);

    // components sum to one for arbitrary y
    source_model m2(2, 2.0);
    error_distribution d2(m2);
    for (double y : {0.13, 1.7, 2.99, 3.5}) {
        auto s = prior_for_symbol(y, d2);
        double sum = 0.0;
        for (double x : s) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ln Q integral agrees between quadrature and uniform sampling") {
    for (auto [K, t] : {std::pair{1, 4.0}, {2, 2.0}}) {
        source_model m(K, t);
        error_distribution d(m);
        double direct = integrate([&](double y) { return std::log(d.q_exact(y)); }, 0.0, 1.0, 1e-12);
        const int N = error_distribution::table_size;
        double sampled = 0.0;
        for (int i = 0; i < N; ++i) sampled += std::log(d.q_exact((i + 0.5) / N));
        sampled /= N;
        CHECK(direct == doctest::Approx(sampled).epsilon(1e-8));
    }
}
