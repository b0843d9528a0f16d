#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ldgmq {

// Dense linear program: min c'x subject to per-row relations and x >= 0.
struct lp_problem {
    enum class rel { le, eq, ge };
    struct row {
        std::vector<double> a;
        rel r = rel::le;
        double b = 0.0;
    };
    int nvars = 0;
    std::vector<double> c;
    std::vector<row> rows;
};

struct lp_result {
    enum class status { optimal, infeasible, unbounded } st = status::infeasible;
    double objective = 0.0;
    std::vector<double> x;     // primal solution (nvars)
    std::vector<double> dual;  // one multiplier per row
};

// Two-phase revised simplex with Bland's rule and an explicit basis
// inverse.  Sized for the dense curve-fitting problems here (a thousand
// rows, a few dozen structural variables).
class simplex_solver {
public:
    explicit simplex_solver(const lp_problem& p) : p_(p) { build(); }

    lp_result solve() {
        lp_result res;
        // phase 1: minimize artificial mass
        if (n_art_ > 0) {
            std::vector<double> cost(ncols_, 0.0);
            for (int j = art_begin_; j < ncols_; ++j) cost[j] = 1.0;
            double v = optimize(cost);
            if (v > 1e-7) {
                res.st = lp_result::status::infeasible;
                return res;
            }
            drive_out_artificials();
        }
        // phase 2
        std::vector<double> cost(ncols_, 0.0);
        for (int j = 0; j < p_.nvars; ++j) cost[j] = p_.c.empty() ? 0.0 : p_.c[j];
        phase2_ = true;
        double v = optimize(cost);
        if (unbounded_) {
            res.st = lp_result::status::unbounded;
            return res;
        }
        res.st = lp_result::status::optimal;
        res.objective = v;
        res.x.assign(p_.nvars, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < p_.nvars) res.x[basis_[i]] = xb_[i];
        res.dual.assign(m_, 0.0);
        // y' = c_B' B^{-1}; undo the row sign normalization
        for (int i = 0; i < m_; ++i) {
            double y = 0.0;
            for (int r = 0; r < m_; ++r) y += cost[basis_[r]] * binv_[r * m_ + i];
            res.dual[i] = row_sign_[i] * y;
        }
        return res;
    }

private:
    void build() {
        m_ = static_cast<int>(p_.rows.size());
        // columns: structural, then slack/surplus, then artificial
        int nslack = 0;
        for (auto& r : p_.rows)
            if (r.r != lp_problem::rel::eq) ++nslack;
        art_begin_ = p_.nvars + nslack;
        cols_.assign(static_cast<std::size_t>(p_.nvars + nslack) * m_, 0.0);
        b_.resize(m_);
        row_sign_.resize(m_);
        basis_.assign(m_, -1);

        for (int i = 0; i < m_; ++i) {
            const auto& r = p_.rows[i];
            if (static_cast<int>(r.a.size()) != p_.nvars)
                throw std::invalid_argument("lp: row width mismatch");
            double sign = r.b < 0.0 ? -1.0 : 1.0;
            row_sign_[i] = sign;
            b_[i] = sign * r.b;
            for (int j = 0; j < p_.nvars; ++j) cols_[static_cast<std::size_t>(j) * m_ + i] = sign * r.a[j];
        }
        int sj = p_.nvars;
        n_art_ = 0;
        std::vector<int> art_rows;
        for (int i = 0; i < m_; ++i) {
            const auto& r = p_.rows[i];
            if (r.r == lp_problem::rel::eq) {
                art_rows.push_back(i);
                continue;
            }
            double dir = (r.r == lp_problem::rel::le) ? 1.0 : -1.0;
            dir *= row_sign_[i];
            cols_[static_cast<std::size_t>(sj) * m_ + i] = dir;
            if (dir > 0.0) basis_[i] = sj;  // slack can start basic
            else art_rows.push_back(i);
            ++sj;
        }
        for (int i : art_rows) {
            cols_.resize(cols_.size() + m_, 0.0);
            cols_[static_cast<std::size_t>(sj) * m_ + i] = 1.0;
            basis_[i] = sj;
            ++sj;
            ++n_art_;
        }
        ncols_ = sj;

        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        xb_ = b_;
        basic_.assign(ncols_, false);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= 0) basic_[basis_[i]] = true;
    }

    const double* col(int j) const { return &cols_[static_cast<std::size_t>(j) * m_]; }

    double optimize(const std::vector<double>& cost) {
        unbounded_ = false;
        std::vector<double> y(m_), d(m_);
        // Dantzig pricing while the objective moves; permanent switch to
        // Bland's rule when it stalls, which rules out cycling
        bool bland = false;
        long stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        for (long iter = 0;; ++iter) {
            if (iter > 500LL * (m_ + ncols_) + 1000000)
                throw std::runtime_error("lp: iteration limit");
            // y' = c_B' B^{-1}
            for (int i = 0; i < m_; ++i) {
                double s = 0.0;
                for (int r = 0; r < m_; ++r) s += cost[basis_[r]] * binv_[r * m_ + i];
                y[i] = s;
            }
            int enter = -1;
            double best_rc = -1e-9;
            for (int j = 0; j < ncols_; ++j) {
                if (in_basis(j)) continue;
                if (phase2_ && j >= art_begin_) continue;  // artificials stay out
                double rc = cost[j];
                const double* a = col(j);
                for (int i = 0; i < m_; ++i) rc -= y[i] * a[i];
                if (rc < best_rc) {
                    enter = j;
                    if (bland) break;
                    best_rc = rc;
                }
            }
            if (enter < 0) {
                double obj = 0.0;
                for (int i = 0; i < m_; ++i) obj += cost[basis_[i]] * xb_[i];
                return obj;
            }
            {
                double obj = 0.0;
                for (int i = 0; i < m_; ++i) obj += cost[basis_[i]] * xb_[i];
                if (obj < last_obj - 1e-12) {
                    last_obj = obj;
                    stall = 0;
                } else if (++stall > 5 * m_ + 200) {
                    bland = true;
                }
            }
            // direction d = B^{-1} a_enter
            const double* a = col(enter);
            for (int i = 0; i < m_; ++i) {
                double s = 0.0;
                for (int r = 0; r < m_; ++r) s += binv_[i * m_ + r] * a[r];
                d[i] = s;
            }
            // ratio test, Bland ties by smallest basis variable
            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (d[i] > 1e-11) {
                    double ratio = xb_[i] / d[i];
                    if (leave < 0 || ratio < best - 1e-12 ||
                        (ratio < best + 1e-12 && basis_[i] < basis_[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) {
                unbounded_ = true;
                return 0.0;
            }
            pivot(enter, leave, d);
        }
    }

    bool in_basis(int j) const { return basic_[j]; }

    void pivot(int enter, int leave, const std::vector<double>& d) {
        double piv = d[leave];
        double step = xb_[leave] / piv;
        for (int i = 0; i < m_; ++i) xb_[i] -= step * d[i];
        xb_[leave] = step;
        double* brow = &binv_[static_cast<std::size_t>(leave) * m_];
        for (int r = 0; r < m_; ++r) brow[r] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            double f = d[i];
            if (f == 0.0) continue;
            double* irow = &binv_[static_cast<std::size_t>(i) * m_];
            for (int r = 0; r < m_; ++r) irow[r] -= f * brow[r];
        }
        basic_[basis_[leave]] = false;
        basic_[enter] = true;
        basis_[leave] = enter;
    }

    // swap degenerate-basic artificials for any usable structural column
    void drive_out_artificials() {
        std::vector<double> d(m_);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            for (int j = 0; j < art_begin_; ++j) {
                if (in_basis(j)) continue;
                const double* a = col(j);
                double s = 0.0;
                for (int r = 0; r < m_; ++r) s += binv_[i * m_ + r] * a[r];
                if (std::abs(s) > 1e-9) {
                    for (int k = 0; k < m_; ++k) {
                        double t = 0.0;
                        for (int r = 0; r < m_; ++r) t += binv_[k * m_ + r] * a[r];
                        d[k] = t;
                    }
                    pivot(j, i, d);
                    break;
                }
            }
        }
    }

    lp_problem p_;
    int m_ = 0, ncols_ = 0, art_begin_ = 0, n_art_ = 0;
    bool phase2_ = false, unbounded_ = false;
    std::vector<double> cols_, b_, xb_, binv_, row_sign_;
    std::vector<int> basis_;
    std::vector<bool> basic_;
};

inline lp_result lp_solve(const lp_problem& p) { return simplex_solver(p).solve(); }

} // namespace ldgmq
