#pragma once

// Per-subformula feasibility fields. Dispatches a decomposed subformula to
// the matching reachability construction:
//
//   static boolean combination   predicate fields + value algebra
//   F[a,b] psi  (psi static)     maximal BRT, target S_psi windowed to [a,b]
//   G[a,b] psi  (psi static)     complement of the minimal BRT of the
//                                failure set (not-psi over [a,b])
//   p U[a,b] q  (p, q static)    maximal BRT, target S_q windowed, constraint S_p
//   ! temporal                   dual operator (!G psi = F !psi, !F psi = G !psi)
//
// The scenario's obstacle map is folded into every construction (reach
// solves constrain to free space, avoid solves add active obstacles to the
// failure set): the mission map is shared knowledge and feasibility is
// always judged against it. Deeper temporal nesting is rejected with
// UnsupportedNesting.

#include "sff/reach/solver.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/ast.hpp"

namespace sff::reach {

struct StlValueConfig {
    SolverConfig solver;
    bool include_map_obstacles = true;
    // Obstacles are closed sets: their masks are inflated by this many grid
    // cells so that boundary seams (walls flush with the workspace edge or
    // with each other) stay strictly blocking at grid resolution.
    double obstacle_margin_cells = 0.5;
};

// Grid over the model's state box: workspace axes with the scenario's point
// counts, velocity axes (when the model has them) clamped to the speed
// limit with the scenario's count when given, 31 points otherwise.
Grid grid_for_scenario(const Scenario& scenario, const dynamics::DynamicsModel& model);

// Static satisfaction field of a temporal-free formula, negative inside,
// with region activity evaluated at time t.
ValueField static_satisfaction_field(const stl::Formula& f, const Scenario& scenario,
                                     const Grid& grid, double t);

ValueField subformula_value(const stl::Formula& f, const Scenario& scenario, const Grid& grid,
                            const StlValueConfig& cfg = {}, SolveStats* stats = nullptr);

}  // namespace sff::reach
