#pragma once

// Best-first branch-and-bound over the LP relaxation. Nodes dive
// depth-first until the first incumbent, then switch to best-bound order
// (FIFO on ties). Branching picks the most-fractional binary, ties to the
// lowest index. An optional repair callback turns a fractional LP solution
// into a feasible integral one when the underlying trajectory already
// satisfies the encoded formula; since the binaries never enter the
// objective, such an incumbent matches its node bound exactly and closes
// the node.

#include <functional>
#include <optional>

#include "sff/planner/encode.hpp"
#include "sff/planner/simplex.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/robustness.hpp"

namespace sff::planner {

struct SolveConfig {
    double gap = 1e-6;  // absolute optimality gap
    long max_nodes = 500000;
    long max_lp_iters = 200000000;
    double eps_check = 1e-6;  // robustness post-check slack
};

struct MilpResult {
    double objective = 0.0;
    std::vector<double> x;
    long nodes = 0;
    long lp_iterations = 0;
    double root_bound = 0.0;
};

using RepairFn =
    std::function<std::optional<std::vector<double>>(const std::vector<double>& lp_solution)>;

// Throws InfeasibleModel when the tree is exhausted without an incumbent,
// IterationLimit on budget exhaustion. `warm_start` seeds the incumbent
// with a known feasible solution (primal heuristic output); the search
// then only has to prove optimality or beat it.
MilpResult solve_milp(const MilpModel& m, const SolveConfig& cfg = {},
                      const RepairFn& repair = {},
                      const std::vector<double>* warm_start = nullptr);

struct PlanResult {
    stl::Trajectory trajectory;
    std::vector<std::vector<double>> controls;
    double objective = 0.0;
    double robustness = 0.0;  // of the subformula conjunction, via stl robustness
    long nodes = 0;
    long lp_iterations = 0;
    double wall_ms = 0.0;
};

// Encode + solve + extract + robustness post-check (EncodingMismatch when
// the trajectory fails the formula it was planned against).
PlanResult plan(const stl::SubformulaSet& subformulas, const Scenario& scenario,
                const CostSpec& cost = {}, const SolveConfig& cfg = {});

// The canonical-assignment repair for encoded models: predicates from the
// trajectory geometry, combinators folded bottom-up, all rows verified.
RepairFn make_canonical_repair(const EncodeResult& enc);

}  // namespace sff::planner
