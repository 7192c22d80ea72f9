#include "sff/reach/stl_value.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sff/dynamics/models.hpp"
#include "sff/stl/robustness.hpp"

namespace sff::reach {

using stl::Formula;
using stl::NodeKind;

Grid grid_for_scenario(const Scenario& scenario, const dynamics::DynamicsModel& model) {
    auto box = model.state_bounds(scenario.workspace);
    std::vector<GridAxis> axes;
    for (std::size_t d = 0; d < box.size(); ++d) {
        GridAxis a;
        a.lo = box[d][0];
        a.hi = box[d][1];
        a.n = d < scenario.grid_points.size() ? scenario.grid_points[d] : 31;
        axes.push_back(a);
    }
    return Grid(std::move(axes));
}

namespace {

bool is_static(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::Atom: return true;
        case NodeKind::Until:
        case NodeKind::Eventually:
        case NodeKind::Always: return false;
        default: break;
    }
    for (const auto& c : f.children())
        if (!is_static(c)) return false;
    return true;
}

// Region activity windows referenced by a static subtree; these are the
// only times the satisfaction field can change.
void collect_breaks(const Formula& f, const Scenario& sc, std::set<double>& out) {
    if (f.kind() == NodeKind::Atom && !f.atom().linear) {
        const Region& r = sc.region(f.atom().name);
        if (r.window) {
            out.insert((*r.window)[0]);
            out.insert(std::nextafter((*r.window)[1], 1e308));
        }
        return;
    }
    for (const auto& c : f.children()) collect_breaks(c, sc, out);
}

TimedSet static_timed_set(const Formula& f, const Scenario& sc, const Grid& grid,
                          double horizon) {
    std::set<double> bset;
    collect_breaks(f, sc, bset);
    std::vector<double> breaks;
    for (double b : bset)
        if (b > 0.0 && b < horizon) breaks.push_back(b);
    std::vector<std::vector<double>> segments;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        double t = i == 0 ? 0.0 : breaks[i - 1];
        segments.push_back(static_satisfaction_field(f, sc, grid, t).values);
    }
    return TimedSet::piecewise(grid, std::move(breaks), std::move(segments));
}

// Free space: the complement of the union of active blocking regions.
// Obstacles are closed sets; their masks are inflated by the configured
// margin so a wall flush with the workspace edge (or two walls meeting
// along an edge) stays strictly blocking at grid resolution.
TimedSet free_space(const Scenario& sc, const Grid& grid, bool enabled, double margin) {
    if (!enabled) return TimedSet::whole_space(grid);
    auto blockers = sc.blocking_regions();
    if (blockers.empty()) return TimedSet::whole_space(grid);
    TimedSet acc = TimedSet::whole_space(grid);
    for (const Region* r : blockers) {
        ValueField f;
        f.grid = grid;
        f.values.resize(grid.size());
        std::vector<double> x(static_cast<std::size_t>(grid.ndims()));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, x);
            f.values[i] = -r->field_value(x) + margin;  // > 0 inside the obstacle
        }
        TimedSet forbidden = TimedSet::constant(std::move(f));
        if (r->window) forbidden = forbidden.windowed(*r->window, -kSentinel);
        acc = TimedSet::combine_max(acc, forbidden);
    }
    return acc;
}

// Failure set for avoid-style solves: the union of active blocking regions
// (negative inside an obstacle), inflated by the same closed-set margin.
TimedSet obstacle_union(const Scenario& sc, const Grid& grid, bool enabled, double margin) {
    TimedSet acc = TimedSet::empty_set(grid);
    if (!enabled) return acc;
    for (const Region* r : sc.blocking_regions()) {
        ValueField f;
        f.grid = grid;
        f.values.resize(grid.size());
        std::vector<double> x(static_cast<std::size_t>(grid.ndims()));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, x);
            f.values[i] = r->field_value(x) - margin;
        }
        TimedSet piece = TimedSet::constant(std::move(f));
        if (r->window) piece = piece.windowed(*r->window, kSentinel);
        acc = TimedSet::combine_min(acc, piece);
    }
    return acc;
}

struct Dispatcher {
    const Scenario& sc;
    const Grid& grid;
    const StlValueConfig& cfg;
    const dynamics::DynamicsModel& model;
    SolveStats* stats;

    double margin() const { return cfg.obstacle_margin_cells * grid.min_spacing(); }

    ValueField eventually(const stl::Interval& w, const Formula& body) {
        if (!is_static(body))
            throw UnsupportedNesting("F over a temporal subformula: " + stl::format_stl(body));
        TimedSet target =
            static_timed_set(body, sc, grid, w.b).windowed({w.a, w.b}, kSentinel);
        TimedSet constraint = free_space(sc, grid, cfg.include_map_obstacles, margin());
        return solve_maximal_brt(model, target, constraint, w.b, grid, cfg.solver, stats);
    }

    ValueField always(const stl::Interval& w, const Formula& body) {
        if (!is_static(body))
            throw UnsupportedNesting("G over a temporal subformula: " + stl::format_stl(body));
        // Feasible iff the failure set (not-psi during the window, plus map
        // obstacles whenever active) is avoidable for all disturbances.
        TimedSet violation =
            static_timed_set(body, sc, grid, w.b).negated().windowed({w.a, w.b}, kSentinel);
        TimedSet failure = TimedSet::combine_min(
            violation, obstacle_union(sc, grid, cfg.include_map_obstacles, margin()));
        ValueField h = solve_minimal_brt(model, failure, w.b, grid, cfg.solver, stats);
        return value_not(h);
    }

    ValueField until(const stl::Interval& w, const Formula& hold, const Formula& reach_f) {
        if (!is_static(hold) || !is_static(reach_f))
            throw UnsupportedNesting("U over temporal operands: " +
                                     stl::format_stl(Formula::until(hold, w, reach_f)));
        TimedSet target =
            static_timed_set(reach_f, sc, grid, w.b).windowed({w.a, w.b}, kSentinel);
        TimedSet constraint = TimedSet::combine_max(
            static_timed_set(hold, sc, grid, w.b),
            free_space(sc, grid, cfg.include_map_obstacles, margin()));
        return solve_maximal_brt(model, target, constraint, w.b, grid, cfg.solver, stats);
    }

    ValueField value(const Formula& f) {
        if (is_static(f)) return static_satisfaction_field(f, sc, grid, 0.0);
        switch (f.kind()) {
            case NodeKind::Eventually: return eventually(f.interval(), f.child(0));
            case NodeKind::Always: return always(f.interval(), f.child(0));
            case NodeKind::Until: return until(f.interval(), f.child(0), f.child(1));
            case NodeKind::Not: {
                // Dual operator: !G psi = F !psi, !F psi = G !psi.
                const Formula& c = f.child(0);
                if (c.kind() == NodeKind::Always)
                    return eventually(c.interval(), Formula::negate(c.child(0)));
                if (c.kind() == NodeKind::Eventually)
                    return always(c.interval(), Formula::negate(c.child(0)));
                throw UnsupportedNesting("negation of " + stl::format_stl(c));
            }
            case NodeKind::And: {
                ValueField acc = value(f.child(0));
                for (std::size_t i = 1; i < f.arity(); ++i)
                    acc = value_and(acc, value(f.child(i)));
                return acc;
            }
            case NodeKind::Or: {
                ValueField acc = value(f.child(0));
                for (std::size_t i = 1; i < f.arity(); ++i)
                    acc = value_or(acc, value(f.child(i)));
                return acc;
            }
            default:
                throw UnsupportedNesting(stl::format_stl(f));
        }
    }
};

}  // namespace

ValueField static_satisfaction_field(const Formula& f, const Scenario& scenario, const Grid& grid,
                                     double t) {
    switch (f.kind()) {
        case NodeKind::True: return constant_field(grid, -kSentinel);
        case NodeKind::Atom: {
            if (!f.atom().linear) {
                const Region& r = scenario.region(f.atom().name);
                if (!r.active(t)) return constant_field(grid, kSentinel);  // absent region
            }
            return stl::predicate_field(f.atom(), scenario, grid);
        }
        case NodeKind::Not:
            return value_not(static_satisfaction_field(f.child(0), scenario, grid, t));
        case NodeKind::And: {
            ValueField acc = static_satisfaction_field(f.child(0), scenario, grid, t);
            for (std::size_t i = 1; i < f.arity(); ++i)
                acc = value_and(acc, static_satisfaction_field(f.child(i), scenario, grid, t));
            return acc;
        }
        case NodeKind::Or: {
            ValueField acc = static_satisfaction_field(f.child(0), scenario, grid, t);
            for (std::size_t i = 1; i < f.arity(); ++i)
                acc = value_or(acc, static_satisfaction_field(f.child(i), scenario, grid, t));
            return acc;
        }
        default:
            throw UnsupportedNesting("temporal operator in a static context: " +
                                     stl::format_stl(f));
    }
}

ValueField subformula_value(const Formula& f, const Scenario& scenario, const Grid& grid,
                            const StlValueConfig& cfg, SolveStats* stats) {
    auto model = dynamics::make_model(scenario.dynamics);
    Dispatcher d{scenario, grid, cfg, *model, stats};
    return d.value(f);
}

}  // namespace sff::reach
