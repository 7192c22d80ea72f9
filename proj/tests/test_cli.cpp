#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sff/scenario.hpp"

using json = nlohmann::ordered_json;

namespace {

const std::string kRoot = SFF_SOURCE_DIR;
const std::string kCli = SFF_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_path = kRoot + "/build/cli_out.txt";
    std::string cmd = kCli + " " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("scenario loading: bundled fixtures and schema errors") {
    sff::Scenario s1 = sff::load_scenario(kRoot + "/scenarios/scenario1.json");
    CHECK(s1.region("o1").box[0][0] == 1.0);
    CHECK(s1.region("o2").box == std::vector<std::array<double, 2>>{{4, 7}, {6, 10}});
    CHECK(s1.region("o3").box == std::vector<std::array<double, 2>>{{7, 9}, {2, 4}});
    CHECK(s1.region("g1").box == std::vector<std::array<double, 2>>{{1, 2}, {9, 10}});
    CHECK(s1.region("school").window.has_value());
    CHECK((*s1.region("school").window)[1] == 1800.0);
    CHECK(!s1.region("construction").active(900.0));  // closed tomorrow, not today
    CHECK(s1.region("school").active(900.0));
    CHECK(s1.horizon_s == 1800.0);
    CHECK(s1.dt_s == 30.0);

    sff::Scenario s3 = sff::load_scenario(kRoot + "/scenarios/scenario3.json");
    CHECK(s3.region("Left").shape == sff::Region::Shape::Halfspace);
    CHECK(s3.region("Left").coeffs[0] == -1.0);

    try {
        sff::parse_scenario_json("{\"name\": \"x\", \"workspace\": [[0,1],[0,1]], "
                                 "\"regions\": {}, \"dynamics\": {\"model\": "
                                 "\"single_integrator_2d\"}, \"horizon_s\": 1, \"dt_s\": 1, "
                                 "\"grid\": [5,5]}");
        FAIL("expected SchemaError");
    } catch (const sff::SchemaError& e) {
        CHECK(e.pointer == "/x0");
    }
}

TEST_CASE("check: exit codes follow the contract") {
    auto feasible = run("check --scenario " + kRoot + "/scenarios/scenario2.json --stl " +
                        q("F[0,30] g1") + " --level 1");
    CHECK(feasible.exit_code == 0);
    json report = json::parse(feasible.out);
    CHECK(report["decision"] == "Proceed");

    auto rejected = run("check --scenario " + kRoot + "/scenarios/scenario2.json --stl " +
                        q("F[0,30](g2 & r1)") + " --level 1");
    CHECK(rejected.exit_code == 4);
    json r2 = json::parse(rejected.out);
    CHECK(r2["decision"] == "Reject");
    CHECK(r2["verdicts"][0]["verdict"] == "InfeasibleEmptyBRT");
}

TEST_CASE("translate: exit codes for success and failure") {
    auto ok = run("translate --scenario " + kRoot + "/scenarios/scenario1.json --adapter " +
                  "fixture:" + kRoot + "/fixtures/gpt4o-scenario1.json --command " + q("go"));
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out).contains("stl_formula"));

    std::string bad = kRoot + "/build/cli_bad_fixture.json";
    {
        std::ofstream out(bad);
        out << "{\"stl_formula\": \"F[0,10](unknown_region)\", \"atomic_predicates\": {}}";
    }
    auto fail = run("translate --scenario " + kRoot + "/scenarios/scenario1.json --adapter " +
                    "fixture:" + bad + " --command " + q("go"));
    CHECK(fail.exit_code == 3);
    CHECK(json::parse(fail.out)["error"] == "TranslationError");

    auto missing = run("translate --scenario " + kRoot +
                       "/scenarios/scenario1.json --adapter fixture:nosuch --command " + q("go"));
    CHECK(missing.exit_code == 3);
}

TEST_CASE("plan: infeasible models exit 5 even when the filter proceeds") {
    // two individually reachable goals that cannot both be visited in time:
    // the per-subformula filter passes, the joint plan is proven infeasible
    std::string path = kRoot + "/build/conjunction_gap.json";
    {
        std::ofstream out(path);
        out << R"({
  "name": "gap",
  "workspace": [[-10, 10], [-1, 1]],
  "regions": {
    "gl": {"kind": "goal", "box": [[-8, -7], [-1, 1]]},
    "gr": {"kind": "goal", "box": [[7, 8], [-1, 1]]}
  },
  "dynamics": {"model": "single_integrator_2d", "v_max": 1.0},
  "x0": [0, 0],
  "horizon_s": 10,
  "dt_s": 2,
  "grid": [41, 11]
})";
    }
    auto r = run("plan --scenario " + path + " --stl " + q("F[0,10] gl & F[0,10] gr") +
                 " --level 1");
    CHECK(r.exit_code == 5);

    auto reachable = run("plan --scenario " + path + " --stl " + q("F[0,10] gr") + " --level 1");
    CHECK(reachable.exit_code == 0);
    json traj = json::parse(reachable.out);
    CHECK(traj["robustness"].get<double>() >= 0.0);
    CHECK(traj["states"].size() == 6);
}

TEST_CASE("plan: rejected missions exit 4 before planning") {
    auto r = run("plan --scenario " + kRoot + "/scenarios/scenario2.json --stl " +
                 q("F[0,30](g2 & r1)") + " --level 1");
    CHECK(r.exit_code == 4);
    CHECK(json::parse(r.out)["decision"] == "Reject");
}

TEST_CASE("pipeline: stage-tagged JSON lines, feedback path") {
    auto r = run("pipeline --scenario " + kRoot + "/scenarios/scenario1.json --adapter " +
                 "fixture:" + kRoot + "/fixtures/gpt4o-scenario1.json --command " +
                 q("school bus mission") + " --level 1");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> stages;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);  // each line is standalone JSON
        REQUIRE(j.contains("stage"));
        stages.push_back(j["stage"].get<std::string>());
    }
    CHECK(stages == std::vector<std::string>{"translate", "check", "feedback"});
}

TEST_CASE("plot: deterministic SVG output") {
    std::string svg1 = kRoot + "/build/map1.svg", svg2 = kRoot + "/build/map2.svg";
    auto r1 = run("plot --scenario " + kRoot + "/scenarios/scenario2.json --out " + svg1);
    CHECK(r1.exit_code == 0);
    auto r2 = run("plot --scenario " + kRoot + "/scenarios/scenario2.json --out " + svg2);
    CHECK(r2.exit_code == 0);
    std::ifstream f1(svg1), f2(svg2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("<svg") == 0);
    CHECK(s1.str().find("O1") != std::string::npos);
}

TEST_CASE("plot: field contour and trajectory overlays") {
    // field dump via check, trajectory via plan, then render everything
    std::string dump = kRoot + "/build/field.bin";
    auto c = run("check --scenario " + kRoot + "/scenarios/scenario2.json --stl " +
                 q("F[0,30] g1") + " --level 1 --dump-field " + dump);
    REQUIRE(c.exit_code == 0);

    std::string traj = kRoot + "/build/traj.json";
    std::string gap_path = kRoot + "/build/conjunction_gap.json";
    auto p = run("plan --scenario " + gap_path + " --stl " + q("F[0,10] gr") +
                 " --level 1 --out " + traj);
    REQUIRE(p.exit_code == 0);

    std::string svg = kRoot + "/build/map_full.svg";
    auto r = run("plot --scenario " + kRoot + "/scenarios/scenario2.json --field " + dump +
                 " --out " + svg);
    CHECK(r.exit_code == 0);
    std::ifstream f(svg);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("<line") != std::string::npos);  // contour segments

    std::string gap_svg = kRoot + "/build/map_traj.svg";
    auto rt = run("plot --scenario " + gap_path + " --traj " + traj + " --out " + gap_svg);
    CHECK(rt.exit_code == 0);
    std::ifstream ft(gap_svg);
    std::stringstream st;
    st << ft.rdbuf();
    CHECK(st.str().find("<polyline") != std::string::npos);
}

TEST_CASE("schema errors exit 1") {
    std::string path = kRoot + "/build/broken_scenario.json";
    {
        std::ofstream out(path);
        out << "{\"name\": \"broken\"}";
    }
    auto r = run("check --scenario " + path + " --stl " + q("true") + " --level 1");
    CHECK(r.exit_code == 1);
}

TEST_CASE("lp export file is written by plan") {
    std::string gap_path = kRoot + "/build/conjunction_gap.json";
    std::string lp = kRoot + "/build/model.lp";
    auto r = run("plan --scenario " + gap_path + " --stl " + q("F[0,10] gr") +
                 " --level 1 --export-lp " + lp);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(lp);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().rfind("Minimize", 0) == 0);
    CHECK(ss.str().find("Binaries") != std::string::npos);
}
