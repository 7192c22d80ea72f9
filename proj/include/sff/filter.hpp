#pragma once

// The STL feasibility filter: decompose the mission formula, compute the
// per-subformula value fields concurrently, evaluate them at the initial
// state, aggregate with the max rule, and collect the infeasible set.

#include <optional>
#include <string>

#include "sff/reach/stl_value.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/decompose.hpp"

namespace sff::filter {

enum class Verdict { Feasible, InfeasibleEmptyBrt, InfeasibleX0Outside, Error };

const char* verdict_name(Verdict v);

struct SubformulaVerdict {
    stl::Formula subformula;
    double value_at_x0 = 0.0;
    Verdict verdict = Verdict::Error;
    std::string reason;           // reason code: feasible | empty_brt | x0_outside | ...
    std::string error_message;    // for Verdict::Error
    stl::Origin provenance;
    double field_min = 0.0;
    // Distance from x0 to the nearest feasible grid node, when one exists.
    std::optional<double> nearest_feasible_distance;
    reach::SolveStats stats;
};

enum class Decision { Proceed, Reject };

struct FeasibilityReport {
    int level = 0;
    Decision decision = Decision::Reject;
    double aggregate_value = 0.0;  // max over verdicts of value_at_x0
    double feasibility_threshold = 0.0;  // verdicts require value < threshold
    std::vector<SubformulaVerdict> verdicts;
    std::vector<int> infeasible;  // indices into verdicts
};

struct FilterConfig {
    reach::StlValueConfig value;
    // Feasible requires value_at_x0 < -kappa * cell_diagonal (grid error
    // band; prevents a false Proceed at the zero level set).
    double kappa = 0.5;
    bool parallel = true;
};

FeasibilityReport run_filter(const stl::Formula& f, const Scenario& scenario,
                             stl::DecompositionLevel level, const reach::Grid& grid,
                             const FilterConfig& cfg = {});

// Stable JSON document: level, decision, aggregate_value,
// verdicts[].{formula, value, verdict, reason}, infeasible indices.
std::string report_to_json(const FeasibilityReport& report);

}  // namespace sff::filter
