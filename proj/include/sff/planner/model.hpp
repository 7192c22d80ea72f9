#pragma once

// Mixed-integer linear model: continuous and binary variables, linear
// rows, minimization objective. Binary variables carry an integrality
// mark; boolean/temporal combinator variables are continuous in [0,1] and
// forced to boolean values by their linking rows once the predicate
// binaries are integral.

#include <string>
#include <vector>

#include "sff/errors.hpp"

namespace sff::planner {

struct Var {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    bool binary = false;
};

enum class RowSense : char { Le = 'L', Ge = 'G', Eq = 'E' };

struct Row {
    std::string name;
    std::vector<std::pair<int, double>> terms;  // (var index, coefficient)
    RowSense sense = RowSense::Le;
    double rhs = 0.0;
};

struct MilpModel {
    std::vector<Var> vars;
    std::vector<Row> rows;
    std::vector<double> objective;  // per-var minimization coefficients

    int add_var(std::string name, double lo, double hi, bool binary = false);
    int add_row(std::string name, std::vector<std::pair<int, double>> terms, RowSense sense,
                double rhs);

    int n_binaries() const;
    int n_bigm_rows = 0;          // predicate linking rows (bookkeeping)
    int n_until_switch_vars = 0;  // until switch-time combinators
};

// CPLEX LP text: Minimize / Subject To / Bounds / Binaries / End.
std::string export_lp(const MilpModel& m);

}  // namespace sff::planner
