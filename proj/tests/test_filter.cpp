#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sff/dynamics/models.hpp"
#include "sff/filter.hpp"
#include "sff/stl/parser.hpp"

using namespace sff;
using namespace sff::filter;

namespace {

const char* kScenario2Stl =
    "F[0,30](g1) & F[0,30](g2 & r1) & G[0,30](!t1) & G[0,30](!t2) & G[0,30](r1 | r2) & "
    "G[0,30](!O1) & G[0,30](!O2) & G[0,30](!O3)";

Scenario scenario2() { return load_scenario(std::string(SFF_SOURCE_DIR) + "/scenarios/scenario2.json"); }
Scenario scenario3() { return load_scenario(std::string(SFF_SOURCE_DIR) + "/scenarios/scenario3.json"); }

FeasibilityReport check(const Scenario& sc, const std::string& text, int level) {
    auto model = dynamics::make_model(sc.dynamics);
    reach::Grid grid = reach::grid_for_scenario(sc, *model);
    return run_filter(stl::parse_stl(text, sc.predicate_names()), sc, {level}, grid);
}

}  // namespace

TEST_CASE("the modified scenario-2 mission flags exactly the impossible subformula") {
    Scenario sc = scenario2();
    FeasibilityReport report = check(sc, kScenario2Stl, 1);
    CHECK(report.decision == Decision::Reject);
    REQUIRE(report.verdicts.size() == 8);
    REQUIRE(report.infeasible.size() == 1);
    const auto& bad = report.verdicts[static_cast<std::size_t>(report.infeasible[0])];
    CHECK(stl::format_stl(bad.subformula) == "F[0,30] (g2 & r1)");
    CHECK(bad.verdict == Verdict::InfeasibleEmptyBrt);
    CHECK(bad.field_min >= 0.0);  // no state is feasible
    for (std::size_t i = 0; i < report.verdicts.size(); ++i)
        if (static_cast<int>(i) != report.infeasible[0])
            CHECK(report.verdicts[i].verdict == Verdict::Feasible);
}

TEST_CASE("the original scenario-2 mission passes the filter") {
    Scenario sc = scenario2();
    FeasibilityReport report =
        check(sc, "G[0,30](!O1 & !O2 & !O3) & G[0,30](r1 | r2) & (!t1 U[0,30] g1) & "
                  "(!t2 U[0,30] g2)",
              1);
    CHECK(report.decision == Decision::Proceed);
    CHECK(report.infeasible.empty());
    CHECK(report.aggregate_value < report.feasibility_threshold);
}

TEST_CASE("reports are bitwise deterministic across runs") {
    Scenario sc = scenario2();
    FeasibilityReport a = check(sc, kScenario2Stl, 1);
    FeasibilityReport b = check(sc, kScenario2Stl, 1);
    CHECK(report_to_json(a) == report_to_json(b));

    // and independent of the execution strategy
    auto model = dynamics::make_model(sc.dynamics);
    reach::Grid grid = reach::grid_for_scenario(sc, *model);
    FilterConfig serial;
    serial.parallel = false;
    FeasibilityReport c = run_filter(stl::parse_stl(kScenario2Stl, sc.predicate_names()), sc,
                                     {1}, grid, serial);
    CHECK(report_to_json(a) == report_to_json(c));
}

TEST_CASE("monotonicity across decomposition levels on the scenario corpus") {
    const char* s3 =
        "G[0,30](!O1 & !Right) & F[0,30](Left & g1) & F[0,30](Left & g2) & "
        "(!t1 U[0,30] g2) & G[0,30]((Left & rd1) | rd2)";
    Scenario sc = scenario3();
    FeasibilityReport l2 = check(sc, s3, 2);
    REQUIRE(l2.decision == Decision::Proceed);
    // conservative rewrites only shrink the feasible set, so the weaker
    // levels must agree
    CHECK(check(sc, s3, 1).decision == Decision::Proceed);
    CHECK(check(sc, s3, 0).decision == Decision::Proceed);
}

TEST_CASE("verdict/field consistency") {
    Scenario sc = scenario2();
    FeasibilityReport report = check(sc, kScenario2Stl, 1);
    for (const auto& v : report.verdicts) {
        if (v.verdict == Verdict::InfeasibleEmptyBrt) CHECK(v.field_min >= 0.0);
        if (v.verdict == Verdict::InfeasibleX0Outside) CHECK(v.field_min < 0.0);
        if (v.verdict == Verdict::Feasible)
            CHECK(v.value_at_x0 < report.feasibility_threshold);
    }

    // a goal sealed away from the start: reachable set exists elsewhere
    Scenario far = sc;
    Region wall;
    wall.name = "wall";
    wall.kind = RegionKind::Obstacle;
    wall.shape = Region::Shape::Box;
    wall.box = {{0, 10}, {4.5, 5.5}};
    far.regions.push_back(wall);
    FeasibilityReport sealed = check(far, "F[0,30] g1", 1);
    REQUIRE(sealed.decision == Decision::Reject);
    CHECK(sealed.verdicts[0].verdict == Verdict::InfeasibleX0Outside);
    CHECK(sealed.verdicts[0].field_min < 0.0);
    REQUIRE(sealed.verdicts[0].nearest_feasible_distance.has_value());
    CHECK(*sealed.verdicts[0].nearest_feasible_distance > 1.0);
}

TEST_CASE("error verdicts force a reject") {
    Scenario sc = scenario2();
    Region bad;
    bad.name = "weird";
    bad.kind = RegionKind::Plain;
    bad.shape = Region::Shape::Nonlinear;
    bad.raw = "x^2 + y^2 <= 1";
    sc.regions.push_back(bad);
    FeasibilityReport report = check(sc, "G[0,30] weird & F[0,30] g1", 1);
    CHECK(report.decision == Decision::Reject);
    REQUIRE(report.infeasible.size() == 1);
    const auto& v = report.verdicts[static_cast<std::size_t>(report.infeasible[0])];
    CHECK(v.verdict == Verdict::Error);
    CHECK(v.reason == "nonlinear_atom");
    // the other subformula still got its analysis
    CHECK(report.verdicts[1].verdict == Verdict::Feasible);
}

TEST_CASE("report JSON carries the stable field names") {
    Scenario sc = scenario2();
    std::string json = report_to_json(check(sc, "F[0,30] g1", 1));
    for (const char* key : {"\"level\"", "\"decision\"", "\"aggregate_value\"", "\"verdicts\"",
                            "\"formula\"", "\"value\"", "\"verdict\"", "\"reason\""})
        CHECK(json.find(key) != std::string::npos);
}
