#pragma once

// Grid-based Hamilton-Jacobi solver for maximal and minimal backward
// reachable tubes with time-varying target and constraint sets.
//
// Scheme: first-order upwind gradients with global Lax-Friedrichs
// dissipation, explicit Euler backward in time, in variational-inequality
// form — the target min (freezing attained reach) and constraint max
// (masking violations) are applied at every step, so the "exists s in
// [t,T]" tube semantics holds without post-processing. Sets are
// piecewise-constant in solver time; within a piece the backward update is
// a fixed operator, so once the iteration reaches a fixpoint the remaining
// steps of the piece are skipped.

#include <array>
#include <vector>

#include "sff/dynamics/models.hpp"
#include "sff/reach/grid.hpp"

namespace sff::reach {

// Time-varying set encoded as a piecewise-constant sequence of fields.
// Negative inside. `breaks` are the interior activity breakpoints.
class TimedSet {
  public:
    TimedSet() = default;

    static TimedSet constant(ValueField base);
    static TimedSet empty_set(const Grid& g) { return constant(constant_field(g, kSentinel)); }
    static TimedSet whole_space(const Grid& g) { return constant(constant_field(g, -kSentinel)); }

    // Piecewise field from explicit segments: segment i applies on
    // [breaks[i-1], breaks[i]) with breaks.front() preceded by -inf.
    static TimedSet piecewise(Grid g, std::vector<double> breaks,
                              std::vector<std::vector<double>> segments);

    // Restricts to a window: outside [w0, w1] every node takes
    // `outside_value` (+kSentinel: empty set, -kSentinel: whole space).
    TimedSet windowed(std::array<double, 2> window, double outside_value) const;

    static TimedSet combine_max(const TimedSet& a, const TimedSet& b);  // intersection
    static TimedSet combine_min(const TimedSet& a, const TimedSet& b);  // union
    TimedSet negated() const;

    const std::vector<double>& at(double t) const;
    const std::vector<double>& breaks() const { return breaks_; }
    const Grid& grid() const { return grid_; }
    bool empty() const { return segments_.empty(); }

  private:
    Grid grid_;
    std::vector<double> breaks_;
    std::vector<std::vector<double>> segments_;  // breaks_.size() + 1 entries
};

struct SolverConfig {
    double cfl = 0.5;
    double dt_override = 0.0;  // 0: CFL-derived; CflViolation when above the CFL limit
    bool early_exit = true;
    double early_exit_tol = 1e-12;
    int max_snapshots = 0;  // 0: retain none
};

struct SolveStats {
    long steps = 0;
    double solve_dt = 0.0;
    long grid_nodes = 0;
};

// Maximal BRT (exists control, for all disturbances, reach the target while
// staying in the constraint set). h < 0 on the tube at t = 0.
ValueField solve_maximal_brt(const dynamics::DynamicsModel& model, const TimedSet& target,
                             const TimedSet& constraint, double horizon, const Grid& grid,
                             const SolverConfig& cfg = {}, SolveStats* stats = nullptr);

// Minimal BRT (for all controls there is a disturbance reaching the target):
// the states from which the target is unavoidable.
ValueField solve_minimal_brt(const dynamics::DynamicsModel& model, const TimedSet& target,
                             double horizon, const Grid& grid, const SolverConfig& cfg = {},
                             SolveStats* stats = nullptr);

}  // namespace sff::reach
