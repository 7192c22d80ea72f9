#pragma once

// Bounded-variable primal simplex over a dense basis inverse. Two phases:
// artificial variables build the initial basis, phase 2 minimizes the real
// objective. Pricing is Dantzig with an automatic switch to Bland's rule
// after a degenerate stretch (anti-cycling); every tie breaks on the lowest
// variable index, so runs are deterministic.

#include <array>
#include <vector>

#include "sff/planner/model.hpp"

namespace sff::planner {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
    LpStatus status = LpStatus::IterLimit;
    double objective = 0.0;
    std::vector<double> x;  // structural variables only
    long iterations = 0;
};

// `bounds` overrides the model's variable bounds when nonempty (branch
// fixings); it must then cover every variable.
LpResult solve_lp(const MilpModel& m, const std::vector<std::array<double, 2>>& bounds = {},
                  long max_iters = 2000000);

}  // namespace sff::planner
