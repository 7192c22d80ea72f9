#include "sff/reach/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

namespace sff::reach {

// ── TimedSet ────────────────────────────────────────────────────────────────

TimedSet TimedSet::constant(ValueField base) {
    TimedSet s;
    s.grid_ = base.grid;
    s.segments_.push_back(std::move(base.values));
    return s;
}

TimedSet TimedSet::piecewise(Grid g, std::vector<double> breaks,
                             std::vector<std::vector<double>> segments) {
    if (segments.size() != breaks.size() + 1)
        throw Error("piecewise TimedSet needs breaks.size()+1 segments");
    TimedSet s;
    s.grid_ = std::move(g);
    s.breaks_ = std::move(breaks);
    s.segments_ = std::move(segments);
    return s;
}

const std::vector<double>& TimedSet::at(double t) const {
    if (segments_.empty()) throw Error("empty TimedSet");
    std::size_t i = 0;
    while (i < breaks_.size() && t >= breaks_[i]) ++i;
    return segments_[i];
}

TimedSet TimedSet::windowed(std::array<double, 2> window, double outside_value) const {
    if (window[0] > window[1]) throw Error("TimedSet window needs t_on <= t_off");
    TimedSet out;
    out.grid_ = grid_;
    std::set<double> bset(breaks_.begin(), breaks_.end());
    bset.insert(window[0]);
    // the instant t_off itself still belongs to the window (closed interval)
    bset.insert(std::nextafter(window[1], 1e308));
    out.breaks_.assign(bset.begin(), bset.end());
    const std::vector<double> outside(grid_.size(), outside_value);
    for (std::size_t i = 0; i <= out.breaks_.size(); ++i) {
        double lo = i == 0 ? -1e308 : out.breaks_[i - 1];
        bool inside = lo >= window[0] && lo <= window[1];
        if (i == 0) inside = window[0] <= -1e308;
        out.segments_.push_back(inside ? at(lo) : outside);
    }
    return out;
}

static TimedSet combine(const TimedSet& a, const TimedSet& b, bool take_max) {
    if (!(a.grid() == b.grid())) throw GridMismatch("TimedSet combine");
    std::set<double> bset(a.breaks().begin(), a.breaks().end());
    bset.insert(b.breaks().begin(), b.breaks().end());
    std::vector<double> breaks(bset.begin(), bset.end());
    std::vector<std::vector<double>> segments;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        double t = i == 0 ? (breaks.empty() ? 0.0 : breaks[0] - 1.0) : breaks[i - 1];
        const auto& va = a.at(t);
        const auto& vb = b.at(t);
        std::vector<double> seg(va.size());
        for (std::size_t k = 0; k < va.size(); ++k)
            seg[k] = take_max ? std::max(va[k], vb[k]) : std::min(va[k], vb[k]);
        segments.push_back(std::move(seg));
    }
    return TimedSet::piecewise(a.grid(), std::move(breaks), std::move(segments));
}

TimedSet TimedSet::combine_max(const TimedSet& a, const TimedSet& b) {
    return combine(a, b, true);
}
TimedSet TimedSet::combine_min(const TimedSet& a, const TimedSet& b) {
    return combine(a, b, false);
}

TimedSet TimedSet::negated() const {
    TimedSet out;
    out.grid_ = grid_;
    out.breaks_ = breaks_;
    for (const auto& seg : segments_) {
        std::vector<double> s(seg.size());
        for (std::size_t k = 0; k < seg.size(); ++k) s[k] = -seg[k];
        out.segments_.push_back(std::move(s));
    }
    return out;
}

// ── solver ──────────────────────────────────────────────────────────────────

namespace {

void warn_if_coarse(const TimedSet& target, const Grid& grid) {
    // Fewer than 3 nodes across the (nonempty) target along some axis means
    // the zero level set is unresolved; warn and continue.
    const auto& vals = target.at(0.0);
    const int nd = grid.ndims();
    std::vector<int> lo(static_cast<std::size_t>(nd), 1 << 30),
        hi(static_cast<std::size_t>(nd), -1);
    std::vector<int> c(static_cast<std::size_t>(nd));
    bool any = false;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] >= 0.0) continue;
        any = true;
        grid.coords(i, c);
        for (int d = 0; d < nd; ++d) {
            lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
            hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
        }
    }
    if (!any) return;
    for (int d = 0; d < nd; ++d) {
        if (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)] + 1 < 3) {
            std::cerr << "warning: grid too coarse across target (axis " << d << ")\n";
            return;
        }
    }
}

class HjSolver {
  public:
    HjSolver(const dynamics::DynamicsModel& model, const Grid& grid,
             dynamics::ControlMode mode, const SolverConfig& cfg)
        : model_(model), grid_(grid), mode_(mode), cfg_(cfg), nd_(grid.ndims()) {
        if (nd_ != model.state_dim())
            throw DimensionMismatch("grid dimensionality vs model state dimension");
        std::vector<std::array<double, 2>> box;
        for (int d = 0; d < nd_; ++d) box.push_back({grid.axis(d).lo, grid.axis(d).hi});
        double inv_sum = 0.0;
        for (int d = 0; d < nd_; ++d) {
            alpha_.push_back(model.dissipation(d, box));
            spacing_.push_back(grid.axis(d).spacing());
            if (alpha_.back() > 0.0) inv_sum += alpha_.back() / spacing_.back();
            strides_.push_back(0);
        }
        std::size_t s = 1;
        for (int d = nd_ - 1; d >= 0; --d) {
            strides_[static_cast<std::size_t>(d)] = s;
            s *= static_cast<std::size_t>(grid.axis(d).n);
        }
        // Monotone-scheme step bound over all axes jointly; reduces to
        // cfl * spacing / alpha in one dimension.
        cfl_dt_ = inv_sum > 0.0 ? cfg.cfl / inv_sum : 0.0;
        if (cfg.dt_override > 0.0) {
            if (cfl_dt_ > 0.0 && cfg.dt_override > cfl_dt_ * (1.0 + 1e-12))
                throw CflViolation("requested step " + std::to_string(cfg.dt_override) +
                                   " exceeds the CFL bound " + std::to_string(cfl_dt_));
            cfl_dt_ = cfg.dt_override;
        }
    }

    double solve_dt(double horizon) const {
        return cfl_dt_ > 0.0 ? cfl_dt_ : std::max(horizon, 1e-12);
    }

    // Godunov flux of the per-axis Hamiltonian H_d(p) = drift*p + gain*|p|
    // over the one-sided differences: the extremum over [dm, dp] (max when
    // dm <= dp, min otherwise; the piecewise-linear extremum sits at an
    // endpoint or at the kink p = 0). First-order upwind, monotone under
    // the CFL bound, stationary at local extrema the way the viscosity
    // solution requires.
    static double axis_flux(const dynamics::AxisTerm& t, double dm, double dp) {
        const double hm = t.drift * dm + t.gain * std::abs(dm);
        const double hp = t.drift * dp + t.gain * std::abs(dp);
        if (dm <= dp) {
            double v = std::max(hm, hp);
            if (dm < 0.0 && 0.0 < dp) v = std::max(v, 0.0);
            return v;
        }
        double v = std::min(hm, hp);
        if (dp < 0.0 && 0.0 < dm) v = std::min(v, 0.0);
        return v;
    }

    // One explicit backward step of length dt from the values in `cur` into
    // `next`: V(t) = V(t+dt) + dt * sum_d axis_flux_d.
    void step(const std::vector<double>& cur, std::vector<double>& next, double dt) const {
        double x[4];
        std::vector<int> c(static_cast<std::size_t>(nd_));
        const std::size_t n = grid_.size();
        for (std::size_t i = 0; i < n; ++i) {
            grid_.coords(i, c);
            for (int d = 0; d < nd_; ++d) x[d] = grid_.coordinate(d, c[static_cast<std::size_t>(d)]);
            const std::span<const double> xs(x, static_cast<std::size_t>(nd_));
            double ham = 0.0;
            for (int d = 0; d < nd_; ++d) {
                const std::size_t stride = strides_[static_cast<std::size_t>(d)];
                const int cd = c[static_cast<std::size_t>(d)];
                const int nn = grid_.axis(d).n;
                const double h = spacing_[static_cast<std::size_t>(d)];
                // Zero-gradient ghost on the missing side: the domain edge
                // is a wall, no value information flows in from beyond it.
                double dm = 0.0, dp = 0.0;
                if (cd > 0) dm = (cur[i] - cur[i - stride]) / h;
                if (cd < nn - 1) dp = (cur[i + stride] - cur[i]) / h;
                ham += axis_flux(model_.axis_term(d, xs, mode_), dm, dp);
            }
            next[i] = cur[i] + dt * ham;
        }
    }

  private:
    const dynamics::DynamicsModel& model_;
    const Grid& grid_;
    dynamics::ControlMode mode_;
    SolverConfig cfg_;
    int nd_;
    std::vector<double> alpha_;
    std::vector<double> spacing_;
    std::vector<std::size_t> strides_;
    double cfl_dt_ = 0.0;
};

ValueField solve_tube(const dynamics::DynamicsModel& model, const TimedSet& target,
                      const TimedSet* constraint, double horizon, const Grid& grid,
                      dynamics::ControlMode mode, const SolverConfig& cfg, SolveStats* stats) {
    if (horizon < 0) throw Error("solver horizon must be nonnegative");
    warn_if_coarse(target, grid);
    HjSolver solver(model, grid, mode, cfg);
    const double dt = solver.solve_dt(horizon);

    // Backward event times where any set changes its active segment.
    std::set<double> events{0.0};
    for (double b : target.breaks())
        if (b > 0.0 && b < horizon) events.insert(b);
    if (constraint)
        for (double b : constraint->breaks())
            if (b > 0.0 && b < horizon) events.insert(b);

    const std::size_t n = grid.size();
    std::vector<double> cur(n), next(n), pde(n);
    {
        const auto& ht = target.at(horizon);
        const std::vector<double>* hc = constraint ? &constraint->at(horizon) : nullptr;
        for (std::size_t i = 0; i < n; ++i)
            cur[i] = hc ? std::max(ht[i], (*hc)[i]) : ht[i];
    }

    ValueField out;
    out.grid = grid;
    long steps = 0;
    long est_total = dt > 0 ? static_cast<long>(horizon / dt) + 1 : 1;
    long snap_stride =
        cfg.max_snapshots > 0 ? std::max<long>(1, est_total / cfg.max_snapshots) : 0;
    if (snap_stride > 0) {
        out.snapshot_times.push_back(horizon);
        out.snapshots.push_back(cur);
    }

    double t = horizon;
    while (t > 1e-12) {
        auto it = events.lower_bound(t);
        double prev_event = it == events.begin() ? 0.0 : *std::prev(it);
        if (prev_event >= t) prev_event = 0.0;
        double step_len = std::min(dt, t - prev_event);
        double t_new = t - step_len;

        solver.step(cur, pde, step_len);
        const auto& ht = target.at(t_new);
        const std::vector<double>* hc = constraint ? &constraint->at(t_new) : nullptr;
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = std::min(pde[i], ht[i]);
            if (hc) v = std::max(v, (*hc)[i]);
            next[i] = v;
            delta = std::max(delta, std::abs(v - cur[i]));
        }
        cur.swap(next);
        ++steps;
        t = t_new;

        if (snap_stride > 0 && steps % snap_stride == 0 && t > 1e-12) {
            out.snapshot_times.push_back(t);
            out.snapshots.push_back(cur);
        }

        // Within a piecewise-constant segment the update operator is fixed;
        // once it stops changing the values, the rest of the segment is an
        // identity and can be skipped.
        if (cfg.early_exit && delta < cfg.early_exit_tol && t > prev_event + 1e-12) {
            t = prev_event;
        }
    }

    out.values = std::move(cur);
    if (snap_stride > 0 && (out.snapshot_times.empty() || out.snapshot_times.back() != 0.0)) {
        out.snapshot_times.push_back(0.0);
        out.snapshots.push_back(out.values);
    }
    if (stats) {
        stats->steps = steps;
        stats->solve_dt = dt;
        stats->grid_nodes = static_cast<long>(n);
    }
    return out;
}

}  // namespace

ValueField solve_maximal_brt(const dynamics::DynamicsModel& model, const TimedSet& target,
                             const TimedSet& constraint, double horizon, const Grid& grid,
                             const SolverConfig& cfg, SolveStats* stats) {
    return solve_tube(model, target, &constraint, horizon, grid,
                      dynamics::ControlMode::Minimizes, cfg, stats);
}

ValueField solve_minimal_brt(const dynamics::DynamicsModel& model, const TimedSet& target,
                             double horizon, const Grid& grid, const SolverConfig& cfg,
                             SolveStats* stats) {
    return solve_tube(model, target, nullptr, horizon, grid, dynamics::ControlMode::Maximizes,
                      cfg, stats);
}

}  // namespace sff::reach
