#include <doctest.h>

#include <cmath>
#include <functional>

#include "ldgmq/exit_ea.hpp"
#include "ldgmq/rng.hpp"

using namespace ldgmq;

TEST_CASE("lp: tiny problems") {
    {
        lp_problem p;  // min x s.t. x >= 3
        p.nvars = 1;
        p.c = {1.0};
        p.rows.push_back({{1.0}, lp_problem::rel::ge, 3.0});
        auto r = lp_solve(p);
        REQUIRE(r.st == lp_result::status::optimal);
        CHECK(r.x[0] == doctest::Approx(3.0));
    }
    {
        lp_problem p;  // equality-only unique point
        p.nvars = 2;
        p.c = {1.0, 1.0};
        p.rows.push_back({{1.0, 1.0}, lp_problem::rel::eq, 2.0});
        p.rows.push_back({{1.0, -1.0}, lp_problem::rel::eq, 0.5});
        auto r = lp_solve(p);
        REQUIRE(r.st == lp_result::status::optimal);
        CHECK(r.x[0] == doctest::Approx(1.25));
        CHECK(r.x[1] == doctest::Approx(0.75));
    }
    {
        lp_problem p;  // infeasible
        p.nvars = 1;
        p.c = {1.0};
        p.rows.push_back({{1.0}, lp_problem::rel::le, 1.0});
        p.rows.push_back({{1.0}, lp_problem::rel::ge, 2.0});
        CHECK(lp_solve(p).st == lp_result::status::infeasible);
    }
    {
        lp_problem p;  // unbounded
        p.nvars = 1;
        p.c = {-1.0};
        p.rows.push_back({{-1.0}, lp_problem::rel::le, 0.0});
        CHECK(lp_solve(p).st == lp_result::status::unbounded);
    }
}

namespace {
// brute-force optimum by enumerating constraint-intersection vertices
double vertex_enumerate(const lp_problem& p) {
    int n = p.nvars;
    std::vector<lp_problem::row> all = p.rows;
    for (int j = 0; j < n; ++j) {  // x_j >= 0
        lp_problem::row r;
        r.a.assign(n, 0.0);
        r.a[j] = 1.0;
        r.r = lp_problem::rel::ge;
        r.b = 0.0;
        all.push_back(r);
    }
    int m = static_cast<int>(all.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int start, int k) {
        if (k == n) {
            std::vector<std::vector<double>> A(n, std::vector<double>(n + 1));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) A[i][j] = all[idx[i]].a[j];
                A[i][n] = all[idx[i]].b;
            }
            for (int col = 0; col < n; ++col) {
                int piv = -1;
                for (int i = col; i < n; ++i)
                    if (std::abs(A[i][col]) > 1e-9) { piv = i; break; }
                if (piv < 0) return;
                std::swap(A[col], A[piv]);
                for (int i = 0; i < n; ++i) {
                    if (i == col) continue;
                    double f = A[i][col] / A[col][col];
                    for (int j = col; j <= n; ++j) A[i][j] -= f * A[col][j];
                }
            }
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
            for (auto& r : all) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += r.a[j] * x[j];
                if (r.r == lp_problem::rel::le && lhs > r.b + 1e-7) return;
                if (r.r == lp_problem::rel::ge && lhs < r.b - 1e-7) return;
                if (r.r == lp_problem::rel::eq && std::abs(lhs - r.b) > 1e-7) return;
            }
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += p.c[j] * x[j];
            best = std::min(best, obj);
            return;
        }
        for (int i = start; i < m; ++i) {
            idx[k] = i;
            rec(i + 1, k + 1);
        }
    };
    rec(0, 0);
    return best;
}
}

TEST_CASE("lp: random problems against vertex enumeration") {
    philox_rng rng(31, rng_stream::test);
    for (int trial = 0; trial < 60; ++trial) {
        lp_problem p;
        p.nvars = 2 + static_cast<int>(rng.below(2));
        p.c.resize(p.nvars);
        for (auto& c : p.c) c = -2.0 + 4.0 * rng.uniform();
        int nrows = 3 + static_cast<int>(rng.below(4));
        for (int i = 0; i < nrows; ++i) {
            lp_problem::row r;
            r.a.resize(p.nvars);
            for (auto& a : r.a) a = -2.0 + 4.0 * rng.uniform();
            r.b = 4.0 * rng.uniform();
            r.r = lp_problem::rel::le;
            p.rows.push_back(r);
        }
        lp_problem::row cap;  // keep the optimum finite
        cap.a.assign(p.nvars, 1.0);
        cap.r = lp_problem::rel::le;
        cap.b = 10.0;
        p.rows.push_back(cap);

        auto got = lp_solve(p);
        double want = vertex_enumerate(p);
        REQUIRE(got.st == lp_result::status::optimal);
        CHECK(got.objective == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("stability polynomial of regular codes") {
    auto r42 = degree_dist::regular(4, 2);
    CHECK(s_of_x(r42, 1.0) == doctest::Approx(1.0));
    double smax = 0.0;
    for (int i = 0; i <= 1000; ++i) smax = std::max(smax, s_of_x(r42, i / 1000.0));
    CHECK(smax == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(icthr_ea(r42) == doctest::Approx(1.0 / 3).epsilon(1e-9));

    auto r53 = degree_dist::regular(5, 3);
    CHECK(icthr_ea(r53) == doctest::Approx(7.0 / 16).epsilon(1e-6));

    CHECK(monotonicity_holds(r42, 1.0 / 3 - 1e-3));
    CHECK(!monotonicity_holds(r42, 1.0 / 3 + 1e-2));
}

TEST_CASE("fixed-point trace endpoints") {
    auto r42 = degree_dist::regular(4, 2);
    auto curve = make_ebp_curve(r42, 0.3);
    auto& last = curve.pts.back();
    CHECK(last.x == doctest::Approx(1.0));
    CHECK(last.ib == doctest::Approx(1.0));
    CHECK(last.ibext == doctest::Approx(1.0 - std::pow(1.0 - 0.3, 4)));
    for (std::size_t i = 1; i < curve.pts.size(); ++i)
        CHECK(curve.pts[i].ibext >= curve.pts[i - 1].ibext - 1e-12);

    degree_dist with_d1;
    with_d1.K = 1;
    with_d1.R = 0.5;
    with_d1.d_b = 4;
    with_d1.v = {{1, 0.1}, {2, 0.6}, {3, 0.3}};  // sum v/d = 0.5 = 1/(R d_b)
    with_d1.validate();
    auto c2 = make_ebp_curve(with_d1, 0.4);
    CHECK(c2.pts.front().ibext > 0.0);
}

TEST_CASE("area under the fixed-point trace") {
    auto r42 = degree_dist::regular(4, 2);
    double ic = 1.0 / 3;
    CHECK(ebp_area(r42, ic) == doctest::Approx(ic / r42.R).epsilon(1e-4));
    CHECK(ebp_area(r42, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    degree_dist with_d1;
    with_d1.K = 1;
    with_d1.R = 0.5;
    with_d1.d_b = 4;
    with_d1.v = {{1, 0.1}, {2, 0.6}, {3, 0.3}};
    with_d1.validate();
    double a = ebp_area(with_d1, 0.4);
    double v1 = 0.1;
    CHECK(a < 0.4 / 0.5);
    CHECK(a > 0.4 / 0.5 - with_d1.d_b * 0.4 * v1);
}

TEST_CASE("erasure thresholds across b-degrees") {
    struct entry { int d_b; double thr; int dcmax; };
    const entry want[] = {{6, 0.4110, 6}, {8, 0.4376, 19}, {11, 0.4448, 127}};
    auto degs = default_degrees();
    for (auto& w : want) {
        optimize_options opt;
        opt.degrees = degs;
        auto res = optimize_binary_ea(0.4461, w.d_b, opt);
        CHECK(std::abs(res.threshold - w.thr) < 0.002);
        int got = res.dist.max_degree();
        auto it = std::find(degs.begin(), degs.end(), w.dcmax);
        REQUIRE(it != degs.end());
        int lo = it == degs.begin() ? w.dcmax : *(it - 1);
        int hi = (it + 1) == degs.end() ? w.dcmax : *(it + 1);
        CHECK(got >= lo);
        CHECK(got <= hi);
    }
}

TEST_CASE("forced-regular degenerate optimization") {
    optimize_options opt;
    opt.degrees = {2};  // only degree 2 available at rate 1/2, d_b = 4
    auto res = optimize_binary_ea(0.5, 4, opt);
    CHECK(res.threshold == doctest::Approx(1.0 / 3).epsilon(1e-6));
}

TEST_CASE("component channels") {
    auto c1 = make_mary_channel(1, 4.0);
    CHECK(c1.ic == doctest::Approx(1.0 - entropy_bits(source_model(1, 4.0))).epsilon(1e-8));

    auto c2 = make_mary_channel(2, 2.0);
    double ht = entropy_bits(source_model(2, 2.0));
    CHECK(2.0 * c2.ic == doctest::Approx(2.0 - ht).epsilon(1e-6));

    // conditioning cannot reduce information
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        auto ch = make_mary_channel(2, t);
        CHECK(ch.ic_k[1] >= ch.ic_k[0] - 1e-9);
    }
}

TEST_CASE("alpha fractions telescope") {
    for (int K = 1; K <= 3; ++K)
        for (int d = 1; d <= 5; ++d)
            for (int i = 0; i <= 20; ++i) {
                double x = i / 20.0;
                double sum = 0.0;
                for (int kp = 0; kp < K; ++kp) sum += alpha_kd(K, kp, d, x);
                CHECK(sum == doctest::Approx(std::pow(x, d - 1)).epsilon(1e-10).scale(1.0));
            }
}

TEST_CASE("alpha derivative matches finite differences") {
    for (int K = 2; K <= 3; ++K)
        for (int d : {2, 3, 7})
            for (int kp = 0; kp < K; ++kp)
                for (double x : {0.1, 0.4, 0.8}) {
                    double h = 1e-6;
                    double fd = (alpha_kd(K, kp, d, x + h) - alpha_kd(K, kp, d, x - h)) / (2 * h);
                    CHECK(alpha_kd_deriv(K, kp, d, x) == doctest::Approx(fd).epsilon(1e-4));
                }
}

TEST_CASE("mary optimization reduces to binary at K = 1") {
    optimize_options opt;
    opt.degrees = degree_set(1.1, 64);
    auto bin = optimize_binary_ea(0.4461, 8, opt);
    auto mar = optimize_mary_ea(0.4461, 8, 1, opt);
    CHECK(mar.ic_thr == doctest::Approx(bin.threshold).epsilon(2e-3));
}

TEST_CASE("4-ary EA threshold lands between 0.93 and the rate") {
    optimize_options opt;
    opt.degrees = default_degrees();
    auto res = optimize_mary_ea(0.9531, 11, 2, opt);
    CHECK(2.0 * res.ic_thr >= 0.93);
    CHECK(2.0 * res.ic_thr <= 0.9531 + 1e-9);
}

TEST_CASE("pace transform behavior") {
    pace_transform pc{12, 100.0};
    CHECK(pc.x_of_l(100.0) == doctest::Approx(1.0));
    CHECK(pc.x_of_l(0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(pc.q_of_x(0.0) >= 0.0);
    CHECK(std::isfinite(pc.q_of_x(0.0)));
    for (double x : {0.0, 0.2, 0.5, 0.9, 0.99}) CHECK(pc.q_of_x(x) >= 0.0);

    pace_transform slow{12, 1e7};
    for (double x : {0.1, 0.5, 0.9})
        CHECK(slow.q_of_x(x) == doctest::Approx(1.0 - x).epsilon(1e-4));
}

TEST_CASE("pacing-aware optimization raises the finite-iteration threshold") {
    optimize_options plain;
    plain.degrees = degree_set(1.1, 200);
    auto base = optimize_binary_ea(0.4461, 12, plain);

    optimize_options paced = plain;
    paced.pace = pace_transform{12, 100.0};
    paced.g_inverse = ea_g_inverse(12);
    auto po = optimize_binary_ea(0.4461, 12, paced);
    CHECK(po.threshold > base.threshold);
}
