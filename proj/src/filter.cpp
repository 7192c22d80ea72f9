#include "sff/filter.hpp"

#include <cmath>
#include <future>

#include <json.hpp>

namespace sff::filter {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Feasible: return "Feasible";
        case Verdict::InfeasibleEmptyBrt: return "InfeasibleEmptyBRT";
        case Verdict::InfeasibleX0Outside: return "InfeasibleX0Outside";
        case Verdict::Error: return "Error";
    }
    return "?";
}

namespace {

SubformulaVerdict check_one(const stl::SubformulaEntry& entry, const Scenario& scenario,
                            const reach::Grid& grid, const FilterConfig& cfg, double threshold) {
    SubformulaVerdict v;
    v.subformula = entry.formula;
    v.provenance = entry.origin;
    try {
        reach::ValueField field =
            reach::subformula_value(entry.formula, scenario, grid, cfg.value, &v.stats);
        v.value_at_x0 = reach::value_at(field, scenario.x0);
        v.field_min = field.min_value();

        // nearest feasible state, for feedback hints
        double best = 1e300;
        const int nd = grid.ndims();
        std::vector<double> x(static_cast<std::size_t>(nd));
        for (std::size_t i = 0; i < field.values.size(); ++i) {
            if (field.values[i] >= 0.0) continue;
            grid.point(i, x);
            double dist_sq = 0.0;
            for (int d = 0; d < nd && d < static_cast<int>(scenario.x0.size()); ++d) {
                double delta = x[static_cast<std::size_t>(d)] -
                               scenario.x0[static_cast<std::size_t>(d)];
                dist_sq += delta * delta;
            }
            best = std::min(best, dist_sq);
        }
        if (best < 1e300) v.nearest_feasible_distance = std::sqrt(best);

        if (v.value_at_x0 < threshold) {
            v.verdict = Verdict::Feasible;
            v.reason = "feasible";
        } else if (v.field_min >= 0.0) {
            v.verdict = Verdict::InfeasibleEmptyBrt;
            v.reason = "empty_brt";
        } else {
            v.verdict = Verdict::InfeasibleX0Outside;
            v.reason = "x0_outside";
        }
    } catch (const NonlinearAtom& e) {
        v.verdict = Verdict::Error;
        v.reason = "nonlinear_atom";
        v.error_message = e.what();
    } catch (const UnsupportedNesting& e) {
        v.verdict = Verdict::Error;
        v.reason = "unsupported_nesting";
        v.error_message = e.what();
    } catch (const Error& e) {
        v.verdict = Verdict::Error;
        v.reason = "solver_error";
        v.error_message = e.what();
    }
    return v;
}

}  // namespace

FeasibilityReport run_filter(const stl::Formula& f, const Scenario& scenario,
                             stl::DecompositionLevel level, const reach::Grid& grid,
                             const FilterConfig& cfg) {
    stl::SubformulaSet set = stl::decompose(f, level);
    const double threshold = -cfg.kappa * grid.cell_diagonal();

    FeasibilityReport report;
    report.level = level.level;
    report.feasibility_threshold = threshold;
    report.verdicts.resize(set.items.size());

    // Independent solves; the reduction below is ordered by subformula
    // index, so the execution order cannot affect the report.
    if (cfg.parallel && set.items.size() > 1) {
        std::vector<std::future<SubformulaVerdict>> jobs;
        jobs.reserve(set.items.size());
        for (const auto& entry : set.items)
            jobs.push_back(std::async(std::launch::async, check_one, std::cref(entry),
                                      std::cref(scenario), std::cref(grid), std::cref(cfg),
                                      threshold));
        for (std::size_t i = 0; i < jobs.size(); ++i) report.verdicts[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < set.items.size(); ++i)
            report.verdicts[i] = check_one(set.items[i], scenario, grid, cfg, threshold);
    }

    double aggregate = -1e300;
    bool any_error = false;
    for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
        const SubformulaVerdict& v = report.verdicts[i];
        if (v.verdict == Verdict::Error) {
            any_error = true;
            report.infeasible.push_back(static_cast<int>(i));
            continue;
        }
        aggregate = std::max(aggregate, v.value_at_x0);
        if (v.verdict != Verdict::Feasible) report.infeasible.push_back(static_cast<int>(i));
    }
    report.aggregate_value = aggregate == -1e300 ? 0.0 : aggregate;
    // Error verdicts force a reject: a filter that cannot analyze a
    // subformula must not wave the mission through.
    report.decision = (report.infeasible.empty() && !any_error) ? Decision::Proceed
                                                                : Decision::Reject;
    return report;
}

std::string report_to_json(const FeasibilityReport& report) {
    nlohmann::ordered_json j;
    j["level"] = report.level;
    j["decision"] = report.decision == Decision::Proceed ? "Proceed" : "Reject";
    j["aggregate_value"] = report.aggregate_value;
    j["feasibility_threshold"] = report.feasibility_threshold;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : report.verdicts) {
        nlohmann::ordered_json vj;
        vj["formula"] = stl::format_stl(v.subformula);
        vj["value"] = v.value_at_x0;
        vj["verdict"] = verdict_name(v.verdict);
        vj["reason"] = v.reason;
        if (!v.error_message.empty()) vj["error"] = v.error_message;
        vj["field_min"] = v.field_min;
        if (v.nearest_feasible_distance)
            vj["nearest_feasible_distance"] = *v.nearest_feasible_distance;
        vj["stats"] = {{"grid_nodes", v.stats.grid_nodes}, {"time_steps", v.stats.steps}};
        j["verdicts"].push_back(std::move(vj));
    }
    j["infeasible"] = report.infeasible;
    return j.dump(2);
}

}  // namespace sff::filter
