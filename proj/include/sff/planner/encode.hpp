#pragma once

// STL-constrained MPC as a MILP: dynamics equalities x(k+1) = A x(k) + B u(k),
// per-predicate big-M rows linking a binary z to satisfaction, and the
// recursive boolean/temporal combinator encoding (And as min-rows, Or as
// max-rows, Always/Eventually as window conjunction/disjunction, Until as
// the disjunction over switch times). Each subformula root is forced true
// at step 0.
//
// Box-region membership expands to the conjunction of its halfspace
// predicates; negation is the affine complement of the combinator value,
// which under the iff big-M pairs coincides with the disjunction of the
// complement halfspaces.

#include <optional>
#include <span>

#include "sff/dynamics/models.hpp"
#include "sff/planner/model.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/decompose.hpp"

namespace sff::planner {

struct CostSpec {
    // Default cost: sum_k ||u(k)||_1 via slack variables. `perturb` adds a
    // deterministic per-component epsilon so the optimum is unique and
    // encodings with the same feasible set produce identical trajectories.
    bool perturb = false;
    double perturb_scale = 1e-4;
    bool maximize_robustness = false;
};

// Metadata the branch-and-bound repair step uses to derive the canonical
// variable assignment from a candidate trajectory.
struct PredicateInfo {
    int var = -1;                                // binary z index
    std::vector<std::pair<int, double>> terms;   // a over structural vars
    double rhs = 0.0;                            // satisfied iff a·x <= rhs
};

struct CombinatorInfo {
    enum class Op { And, Or, Not };
    Op op;
    int var = -1;
    std::vector<int> child_vars;  // -1 entries never occur; consts folded away
};

struct EncodeResult {
    MilpModel model;
    int n_steps = 0;
    double dt = 0.0;
    int state_dim = 0;
    int control_dim = 0;
    std::vector<int> x_index;  // x(k)_d at [k*state_dim + d]
    std::vector<int> u_index;  // u(k)_d at [k*control_dim + d]
    std::vector<PredicateInfo> predicates;
    std::vector<CombinatorInfo> combinators;  // creation order: children first
    std::vector<int> root_vars;               // per subformula, -1 when constant-true
    // Boxes every feasible trajectory must visit (from eventually/until
    // roots); feeds the travel bounds and the waypoint warm start.
    std::vector<std::vector<std::array<double, 2>>> visit_targets;
};

EncodeResult encode(const stl::SubformulaSet& subformulas, const dynamics::DynamicsModel& model,
                    const Scenario& scenario, std::span<const double> x0, int n_steps, double dt,
                    const CostSpec& cost = {});

}  // namespace sff::planner
