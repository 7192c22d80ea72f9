// Command-line surface: translate / check / plan / pipeline / plot.
// Machine-readable JSON goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 success, 1 usage or input error, 3 translation failure,
// 4 rejected by the feasibility filter, 5 planner proved infeasibility.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sff/dynamics/models.hpp"
#include "sff/feedback/feedback.hpp"
#include "sff/feedback/translate.hpp"
#include "sff/filter.hpp"
#include "sff/planner/bnb.hpp"
#include "sff/plot.hpp"
#include "sff/reach/stl_value.hpp"
#include "sff/stl/parser.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTranslation = 3;
constexpr int kExitRejected = 4;
constexpr int kExitInfeasible = 5;

struct CommonOptions {
    std::string scenario_path;
    std::string fixtures_dir = "fixtures";
    std::string llm_endpoint;
    std::string llm_model;
    double llm_timeout_s = 30.0;
};

sff::feedback::HttpAdapterConfig http_config(const CommonOptions& opts) {
    sff::feedback::HttpAdapterConfig cfg;
    cfg.endpoint = opts.llm_endpoint;
    cfg.model = opts.llm_model;
    cfg.timeout_s = opts.llm_timeout_s;
    return cfg;
}

json stage_tagged(const char* stage, const json& payload) {
    json out;
    out["stage"] = stage;
    for (const auto& [key, value] : payload.items()) out[key] = value;
    return out;
}

json trajectory_json(const sff::planner::PlanResult& plan) {
    json j;
    j["dt_s"] = plan.trajectory.dt;
    j["states"] = plan.trajectory.samples;
    j["controls"] = plan.controls;
    j["objective"] = plan.objective;
    j["robustness"] = plan.robustness;
    j["stats"] = {{"nodes", plan.nodes},
                  {"lp_iterations", plan.lp_iterations},
                  {"wall_ms", plan.wall_ms}};
    return j;
}

int run_check_stage(const sff::Scenario& scenario, const sff::stl::Formula& formula, int level,
                    double kappa, sff::filter::FeasibilityReport& report,
                    const std::string& dump_path) {
    auto model = sff::dynamics::make_model(scenario.dynamics);
    sff::reach::Grid grid = sff::reach::grid_for_scenario(scenario, *model);
    sff::filter::FilterConfig cfg;
    cfg.kappa = kappa;
    report = sff::filter::run_filter(formula, scenario, {level}, grid, cfg);

    if (!dump_path.empty()) {
        // aggregate satisfaction field: max over the subformula fields
        sff::reach::ValueField agg = sff::reach::constant_field(grid, -sff::reach::kSentinel);
        auto set = sff::stl::decompose(formula, {level});
        for (const auto& item : set.items) {
            try {
                agg = sff::reach::value_and(
                    agg, sff::reach::subformula_value(item.formula, scenario, grid, cfg.value));
            } catch (const sff::Error&) {
                // error verdicts already force a reject; skip their fields
            }
        }
        sff::reach::dump_field(agg, dump_path);
    }
    return report.decision == sff::filter::Decision::Proceed ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STL mission feasibility filter and planner"};
    app.require_subcommand(1);
    CommonOptions opts;

    // ── translate ───────────────────────────────────────────────────────
    auto* cmd_translate = app.add_subcommand("translate", "natural language to STL");
    std::string adapter_spec, command_text, map_description;
    cmd_translate->add_option("--scenario", opts.scenario_path)->required();
    cmd_translate->add_option("--adapter", adapter_spec)->required();
    cmd_translate->add_option("--command", command_text)->required();
    cmd_translate->add_option("--map-description", map_description);
    cmd_translate->add_option("--fixtures-dir", opts.fixtures_dir);
    cmd_translate->add_option("--llm-endpoint", opts.llm_endpoint);
    cmd_translate->add_option("--llm-model", opts.llm_model);
    cmd_translate->add_option("--llm-timeout-s", opts.llm_timeout_s);

    // ── check ───────────────────────────────────────────────────────────
    auto* cmd_check = app.add_subcommand("check", "feasibility filter");
    std::string stl_text, dump_field_path;
    int level = 1;
    double kappa = 0.5;
    cmd_check->add_option("--scenario", opts.scenario_path)->required();
    cmd_check->add_option("--stl", stl_text)->required();
    cmd_check->add_option("--level", level)->check(CLI::Range(0, 2));
    cmd_check->add_option("--kappa", kappa);
    cmd_check->add_option("--dump-field", dump_field_path);

    // ── plan ────────────────────────────────────────────────────────────
    auto* cmd_plan = app.add_subcommand("plan", "filter then MILP planning");
    std::string export_lp_path, traj_out;
    bool perturb_cost = false, maximize_rho = false;
    double gap = 1e-6;
    long max_nodes = 500000;
    cmd_plan->add_option("--scenario", opts.scenario_path)->required();
    cmd_plan->add_option("--stl", stl_text)->required();
    cmd_plan->add_option("--level", level)->check(CLI::Range(0, 2));
    cmd_plan->add_option("--kappa", kappa);
    cmd_plan->add_option("--export-lp", export_lp_path);
    cmd_plan->add_option("--out", traj_out);
    cmd_plan->add_flag("--perturb-cost", perturb_cost);
    cmd_plan->add_flag("--maximize-robustness", maximize_rho);
    cmd_plan->add_option("--gap", gap);
    cmd_plan->add_option("--max-nodes", max_nodes);

    // ── pipeline ────────────────────────────────────────────────────────
    auto* cmd_pipeline = app.add_subcommand("pipeline", "translate, check, plan or feedback");
    cmd_pipeline->add_option("--scenario", opts.scenario_path)->required();
    cmd_pipeline->add_option("--adapter", adapter_spec)->required();
    cmd_pipeline->add_option("--command", command_text)->required();
    cmd_pipeline->add_option("--level", level)->check(CLI::Range(0, 2));
    cmd_pipeline->add_option("--kappa", kappa);
    cmd_pipeline->add_option("--fixtures-dir", opts.fixtures_dir);
    cmd_pipeline->add_option("--llm-endpoint", opts.llm_endpoint);
    cmd_pipeline->add_option("--llm-model", opts.llm_model);
    cmd_pipeline->add_option("--llm-timeout-s", opts.llm_timeout_s);

    // ── plot ────────────────────────────────────────────────────────────
    auto* cmd_plot = app.add_subcommand("plot", "SVG map rendering");
    std::string field_path, traj_path, out_path;
    cmd_plot->add_option("--scenario", opts.scenario_path)->required();
    cmd_plot->add_option("--field", field_path);
    cmd_plot->add_option("--traj", traj_path);
    cmd_plot->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        sff::Scenario scenario = sff::load_scenario(opts.scenario_path);

        if (*cmd_translate) {
            std::string description =
                map_description.empty() ? sff::feedback::describe_map(scenario) : map_description;
            try {
                auto adapter = sff::feedback::make_adapter(adapter_spec, opts.fixtures_dir,
                                                           http_config(opts));
                auto result =
                    sff::feedback::translate(*adapter, command_text, description, scenario);
                std::cout << sff::feedback::translation_to_json(result) << "\n";
                return kExitOk;
            } catch (const sff::TranslationError& e) {
                json j;
                j["error"] = "TranslationError";
                j["diagnostics"] = e.diagnostics;
                j["raw"] = e.raw;
                std::cout << j.dump(2) << "\n";
                std::cerr << "error: " << e.what() << "\n";
                return kExitTranslation;
            } catch (const sff::AdapterUnavailable& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitTranslation;
            }
        }

        if (*cmd_check) {
            sff::stl::Formula f = sff::stl::parse_stl(stl_text, scenario.predicate_names());
            sff::filter::FeasibilityReport report;
            int code = run_check_stage(scenario, f, level, kappa, report, dump_field_path);
            std::cout << sff::filter::report_to_json(report) << "\n";
            return code;
        }

        if (*cmd_plan) {
            sff::stl::Formula f = sff::stl::parse_stl(stl_text, scenario.predicate_names());
            sff::filter::FeasibilityReport report;
            int code = run_check_stage(scenario, f, level, kappa, report, "");
            if (code != kExitOk) {
                std::cout << sff::filter::report_to_json(report) << "\n";
                std::cerr << "rejected by the feasibility filter\n";
                return kExitRejected;
            }
            auto set = sff::stl::decompose(f, {level});
            sff::planner::CostSpec cost;
            cost.perturb = perturb_cost;
            cost.maximize_robustness = maximize_rho;
            if (!export_lp_path.empty()) {
                auto model = sff::dynamics::make_model(scenario.dynamics);
                auto enc = sff::planner::encode(set, *model, scenario, scenario.x0,
                                                scenario.steps(), scenario.dt_s, cost);
                std::ofstream out(export_lp_path);
                out << sff::planner::export_lp(enc.model);
            }
            sff::planner::SolveConfig solve_cfg;
            solve_cfg.gap = gap;
            solve_cfg.max_nodes = max_nodes;
            try {
                auto plan_result = sff::planner::plan(set, scenario, cost, solve_cfg);
                json j = trajectory_json(plan_result);
                std::cout << j.dump(2) << "\n";
                if (!traj_out.empty()) {
                    std::ofstream out(traj_out);
                    out << j.dump(2) << "\n";
                }
                return kExitOk;
            } catch (const sff::InfeasibleModel& e) {
                std::cerr << "planner: " << e.what() << "\n";
                return kExitInfeasible;
            }
        }

        if (*cmd_pipeline) {
            auto adapter =
                sff::feedback::make_adapter(adapter_spec, opts.fixtures_dir, http_config(opts));
            sff::feedback::TranslationResult translation;
            try {
                translation = sff::feedback::translate(
                    *adapter, command_text, sff::feedback::describe_map(scenario), scenario);
            } catch (const sff::TranslationError& e) {
                json j;
                j["stage"] = "translate";
                j["error"] = "TranslationError";
                j["diagnostics"] = e.diagnostics;
                std::cout << j.dump() << "\n";
                return kExitTranslation;
            }
            std::cout << stage_tagged("translate",
                                      json::parse(sff::feedback::translation_to_json(translation)))
                             .dump()
                      << "\n";

            const sff::Scenario& sc = translation.augmented_scenario;
            sff::filter::FeasibilityReport report;
            run_check_stage(sc, translation.linked, level, kappa, report, "");
            std::cout << stage_tagged("check", json::parse(sff::filter::report_to_json(report)))
                             .dump()
                      << "\n";

            if (report.decision == sff::filter::Decision::Proceed) {
                auto set = sff::stl::decompose(translation.linked, {level});
                try {
                    auto plan_result = sff::planner::plan(set, sc);
                    std::cout << stage_tagged("plan", trajectory_json(plan_result)).dump()
                              << "\n";
                } catch (const sff::InfeasibleModel& e) {
                    json j;
                    j["stage"] = "plan";
                    j["error"] = "Infeasible";
                    j["message"] = e.what();
                    std::cout << j.dump() << "\n";
                    return kExitInfeasible;
                }
            } else {
                auto fb = sff::feedback::build_feedback(report, sc);
                std::cout << stage_tagged("feedback",
                                          json::parse(sff::feedback::feedback_to_json(fb)))
                                 .dump()
                          << "\n";
            }
            return kExitOk;
        }

        if (*cmd_plot) {
            sff::plot::PlotInputs inputs;
            inputs.scenario = &scenario;
            if (!field_path.empty()) inputs.field = sff::reach::load_field(field_path);
            if (!traj_path.empty()) {
                std::ifstream in(traj_path);
                if (!in) throw sff::Error("cannot open trajectory file '" + traj_path + "'");
                json j = json::parse(in);
                for (const auto& s : j.at("states"))
                    inputs.trajectory.push_back(s.get<std::vector<double>>());
            }
            std::ofstream out(out_path);
            if (!out) throw sff::Error("cannot open '" + out_path + "' for writing");
            out << sff::plot::render_svg(inputs);
            return kExitOk;
        }
    } catch (const sff::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const sff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
