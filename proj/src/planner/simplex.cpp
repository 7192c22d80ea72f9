#include "sff/planner/simplex.hpp"

#include <cmath>
#include <limits>

namespace sff::planner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kPriceTol = 1e-9;
constexpr double kFeasTol = 1e-7;

enum : signed char { kAtLo = 0, kAtHi = 1, kBasic = 2 };

class Simplex {
  public:
    Simplex(const MilpModel& m, const std::vector<std::array<double, 2>>& bounds_override) {
        const int n = static_cast<int>(m.vars.size());
        m_ = static_cast<int>(m.rows.size());

        // Columns: structurals, then one slack per Le/Ge row, then one
        // artificial per row. Ge rows are flipped to Le.
        cols_.resize(static_cast<std::size_t>(n));
        lo_.reserve(static_cast<std::size_t>(n + 2 * m_));
        for (int j = 0; j < n; ++j) {
            double lo = m.vars[static_cast<std::size_t>(j)].lo;
            double hi = m.vars[static_cast<std::size_t>(j)].hi;
            if (!bounds_override.empty()) {
                lo = bounds_override[static_cast<std::size_t>(j)][0];
                hi = bounds_override[static_cast<std::size_t>(j)][1];
            }
            lo_.push_back(lo);
            hi_.push_back(hi);
            real_cost_.push_back(m.objective[static_cast<std::size_t>(j)]);
        }
        b_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const Row& r = m.rows[static_cast<std::size_t>(i)];
            const double sign = r.sense == RowSense::Ge ? -1.0 : 1.0;
            b_[static_cast<std::size_t>(i)] = sign * r.rhs;
            for (const auto& [j, a] : r.terms)
                if (a != 0.0) cols_[static_cast<std::size_t>(j)].push_back({i, sign * a});
            if (r.sense != RowSense::Eq) {
                cols_.push_back({{i, 1.0}});
                lo_.push_back(0.0);
                hi_.push_back(kInf);
                real_cost_.push_back(0.0);
            }
        }
        n_structural_ = n;
        first_artificial_ = static_cast<int>(cols_.size());
        for (int i = 0; i < m_; ++i) {
            cols_.push_back({{i, 1.0}});  // sign fixed after the initial point is known
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            real_cost_.push_back(0.0);
        }
        n_total_ = static_cast<int>(cols_.size());
        status_.assign(static_cast<std::size_t>(n_total_), kAtLo);
        cost_.assign(static_cast<std::size_t>(n_total_), 0.0);

        // Nonbasic start: everything at its finite lower bound.
        // Residuals decide each artificial's sign so it starts feasible.
        std::vector<double> r = b_;
        for (int j = 0; j < first_artificial_; ++j) {
            const double v = nonbasic_value(j);
            if (v != 0.0)
                for (const auto& [row, a] : cols_[static_cast<std::size_t>(j)])
                    r[static_cast<std::size_t>(row)] -= a * v;
        }
        basis_.resize(static_cast<std::size_t>(m_));
        xb_.resize(static_cast<std::size_t>(m_));
        binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            const int aj = first_artificial_ + i;
            const double sign = r[static_cast<std::size_t>(i)] >= 0.0 ? 1.0 : -1.0;
            cols_[static_cast<std::size_t>(aj)][0].second = sign;
            basis_[static_cast<std::size_t>(i)] = aj;
            status_[static_cast<std::size_t>(aj)] = kBasic;
            xb_[static_cast<std::size_t>(i)] = std::abs(r[static_cast<std::size_t>(i)]);
            binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                  static_cast<std::size_t>(i)] = sign;  // B = diag(sign), B^-1 likewise
            cost_[static_cast<std::size_t>(aj)] = 1.0;  // phase-1 objective
        }
    }

    LpResult run(long max_iters) {
        LpResult out;
        // Phase 1: drive the artificials to zero.
        LpStatus s1 = iterate(max_iters);
        out.iterations = iters_;
        if (s1 == LpStatus::IterLimit) return out;
        if (phase_objective() > kFeasTol) {
            out.status = LpStatus::Infeasible;
            return out;
        }
        // Pin artificials and switch to the real objective.
        for (int j = first_artificial_; j < n_total_; ++j) hi_[static_cast<std::size_t>(j)] = 0.0;
        cost_ = real_cost_;
        cost_.resize(static_cast<std::size_t>(n_total_), 0.0);
        LpStatus s2 = iterate(max_iters);
        out.iterations = iters_;
        if (s2 != LpStatus::Optimal) {
            out.status = s2;
            return out;
        }
        out.status = LpStatus::Optimal;
        out.x.assign(static_cast<std::size_t>(n_structural_), 0.0);
        for (int j = 0; j < n_structural_; ++j)
            if (status_[static_cast<std::size_t>(j)] != kBasic)
                out.x[static_cast<std::size_t>(j)] = nonbasic_value(j);
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] < n_structural_)
                out.x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] =
                    xb_[static_cast<std::size_t>(i)];
        out.objective = 0.0;
        for (int j = 0; j < n_structural_; ++j)
            out.objective += real_cost_[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
        return out;
    }

  private:
    double nonbasic_value(int j) const {
        if (status_[static_cast<std::size_t>(j)] == kAtHi) return hi_[static_cast<std::size_t>(j)];
        double lo = lo_[static_cast<std::size_t>(j)];
        return std::isfinite(lo) ? lo : 0.0;
    }

    double phase_objective() const {
        double v = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= first_artificial_)
                v += xb_[static_cast<std::size_t>(i)];
        return v;
    }

    void refresh_xb() {
        std::vector<double> r = b_;
        for (int j = 0; j < n_total_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == kBasic) continue;
            const double v = nonbasic_value(j);
            if (v != 0.0)
                for (const auto& [row, a] : cols_[static_cast<std::size_t>(j)])
                    r[static_cast<std::size_t>(row)] -= a * v;
        }
        for (int i = 0; i < m_; ++i) {
            double acc = 0.0;
            const double* bi = &binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_)];
            for (int k = 0; k < m_; ++k) acc += bi[k] * r[static_cast<std::size_t>(k)];
            xb_[static_cast<std::size_t>(i)] = acc;
        }
    }

    LpStatus iterate(long max_iters) {
        std::vector<double> y(static_cast<std::size_t>(m_));
        std::vector<double> w(static_cast<std::size_t>(m_));
        int degenerate_streak = 0;
        bool bland = false;
        while (true) {
            if (iters_ >= max_iters) return LpStatus::IterLimit;
            ++iters_;
            if (iters_ % 512 == 0) refresh_xb();

            // y = c_B B^-1
            for (int jj = 0; jj < m_; ++jj) y[static_cast<std::size_t>(jj)] = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
                if (cb == 0.0) continue;
                const double* bi = &binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_)];
                for (int jj = 0; jj < m_; ++jj) y[static_cast<std::size_t>(jj)] += cb * bi[jj];
            }

            // pricing
            int enter = -1;
            double best = 0.0;
            for (int j = 0; j < n_total_; ++j) {
                const signed char st = status_[static_cast<std::size_t>(j)];
                if (st == kBasic) continue;
                if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]) continue;
                double d = cost_[static_cast<std::size_t>(j)];
                for (const auto& [row, a] : cols_[static_cast<std::size_t>(j)])
                    d -= y[static_cast<std::size_t>(row)] * a;
                const bool eligible = (st == kAtLo && d < -kPriceTol) ||
                                      (st == kAtHi && d > kPriceTol);
                if (!eligible) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (std::abs(d) > best + 1e-15) {
                    best = std::abs(d);
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            const double sigma = status_[static_cast<std::size_t>(enter)] == kAtLo ? 1.0 : -1.0;

            // w = B^-1 a_enter
            for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] = 0.0;
            for (const auto& [row, a] : cols_[static_cast<std::size_t>(enter)])
                for (int i = 0; i < m_; ++i)
                    w[static_cast<std::size_t>(i)] +=
                        binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                              static_cast<std::size_t>(row)] * a;

            // ratio test
            double t_max = hi_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];
            int leave = -1;
            bool leave_to_hi = false;
            for (int i = 0; i < m_; ++i) {
                const double d = sigma * w[static_cast<std::size_t>(i)];
                const int bj = basis_[static_cast<std::size_t>(i)];
                double limit;
                bool to_hi;
                if (d > kPivotTol) {
                    const double lo = lo_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(lo)) continue;
                    limit = (xb_[static_cast<std::size_t>(i)] - lo) / d;
                    to_hi = false;
                } else if (d < -kPivotTol) {
                    const double hi = hi_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(hi)) continue;
                    limit = (xb_[static_cast<std::size_t>(i)] - hi) / d;
                    to_hi = true;
                } else {
                    continue;
                }
                if (limit < 0.0) limit = 0.0;
                if (limit < t_max - kPivotTol ||
                    (limit < t_max + kPivotTol && leave >= 0 &&
                     bj < basis_[static_cast<std::size_t>(leave)])) {
                    t_max = limit;
                    leave = i;
                    leave_to_hi = to_hi;
                }
            }
            if (!std::isfinite(t_max)) return LpStatus::Unbounded;

            if (t_max < kPivotTol) {
                if (++degenerate_streak > 64) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }

            // apply the move
            for (int i = 0; i < m_; ++i)
                xb_[static_cast<std::size_t>(i)] -= sigma * t_max * w[static_cast<std::size_t>(i)];

            if (leave < 0) {
                // bound flip, basis unchanged
                status_[static_cast<std::size_t>(enter)] =
                    status_[static_cast<std::size_t>(enter)] == kAtLo ? kAtHi : kAtLo;
                continue;
            }

            const int leaving = basis_[static_cast<std::size_t>(leave)];
            status_[static_cast<std::size_t>(leaving)] = leave_to_hi ? kAtHi : kAtLo;
            basis_[static_cast<std::size_t>(leave)] = enter;
            const double enter_val = nonbasic_value_at(enter, sigma, t_max);
            status_[static_cast<std::size_t>(enter)] = kBasic;
            xb_[static_cast<std::size_t>(leave)] = enter_val;

            // B^-1 update: pivot on w[leave]
            const double piv = w[static_cast<std::size_t>(leave)];
            double* br = &binv_[static_cast<std::size_t>(leave) * static_cast<std::size_t>(m_)];
            for (int jj = 0; jj < m_; ++jj) br[jj] /= piv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave) continue;
                const double f = w[static_cast<std::size_t>(i)];
                if (f == 0.0) continue;
                double* bi = &binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_)];
                for (int jj = 0; jj < m_; ++jj) bi[jj] -= f * br[jj];
            }
        }
    }

    double nonbasic_value_at(int j, double sigma, double t) const {
        const signed char st = status_[static_cast<std::size_t>(j)];
        const double base = st == kAtHi ? hi_[static_cast<std::size_t>(j)]
                                        : (std::isfinite(lo_[static_cast<std::size_t>(j)])
                                               ? lo_[static_cast<std::size_t>(j)]
                                               : 0.0);
        return base + sigma * t;
    }

    int m_ = 0;
    int n_structural_ = 0;
    int first_artificial_ = 0;
    int n_total_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, hi_, cost_, real_cost_, b_;
    std::vector<int> basis_;
    std::vector<double> xb_;
    std::vector<double> binv_;
    std::vector<signed char> status_;
    long iters_ = 0;
};

}  // namespace

LpResult solve_lp(const MilpModel& m, const std::vector<std::array<double, 2>>& bounds,
                  long max_iters) {
    if (m.rows.empty()) {
        // Pure bound minimization.
        LpResult out;
        out.status = LpStatus::Optimal;
        for (std::size_t j = 0; j < m.vars.size(); ++j) {
            double lo = bounds.empty() ? m.vars[j].lo : bounds[j][0];
            double hi = bounds.empty() ? m.vars[j].hi : bounds[j][1];
            if (lo > hi) {
                out.status = LpStatus::Infeasible;
                return out;
            }
            double v = m.objective[j] >= 0 ? lo : hi;
            out.x.push_back(v);
            out.objective += m.objective[j] * v;
        }
        return out;
    }
    return Simplex(m, bounds).run(max_iters);
}

}  // namespace sff::planner
