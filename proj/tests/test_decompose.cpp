#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "sff/stl/decompose.hpp"
#include "sff/stl/parser.hpp"
#include "sff/stl/robustness.hpp"
#include "support/oracles.hpp"

using namespace sff;
using namespace sff::stl;

namespace {

const std::set<std::string> kS3{"O1", "Right", "Left", "g1", "g2", "t1", "rd1", "rd2"};

// The scenario-3 mission formula.
Formula s3_original() {
    return parse_stl(
        "G[0,30](!O1 & !Right) & F[0,30](Left & g1) & F[0,30](Left & g2) & "
        "(!t1 U[0,30] g2) & G[0,30]((Left & rd1) | rd2)",
        kS3);
}

std::vector<std::string> texts(const SubformulaSet& s) {
    std::vector<std::string> out;
    for (const auto& e : s.items) out.push_back(format_stl(e.formula));
    return out;
}

Scenario dummy_scenario() {
    Scenario s;
    s.workspace = {{-5, 5}};
    s.dynamics.model = "single_integrator_2d";
    s.x0 = {0};
    s.horizon_s = 10;
    s.dt_s = 1;
    s.grid_points = {11};
    return s;
}

double min_rho(const SubformulaSet& set, const Trajectory& t, const Scenario& sc) {
    double m = 1e300;
    for (const auto& e : set.items) m = std::min(m, robustness(t, 0, e.formula, sc));
    return m;
}

}  // namespace

TEST_CASE("rewrite_always: exact conjunction split") {
    Formula f = parse_stl("G[0,30](!O1 & !Right)", kS3);
    Formula r = rewrite_always(f);
    CHECK(format_stl(r) == "(G[0,30] (! O1) & G[0,30] (! Right))");

    Formula one = parse_stl("G[0,5] g1", kS3);
    CHECK(rewrite_always(one).same_node(one));  // identity on non-match

    Formula three = parse_stl("G[0,5](g1 & g2 & t1)", kS3);
    CHECK(rewrite_always(three).arity() == 3);
}

TEST_CASE("rewrite_until") {
    Formula f = parse_stl("!t1 U[0,30] g2", kS3);
    CHECK(format_stl(rewrite_until(f)) == "(G[0,30] (! t1) & F[0,30] g2)");
    Formula g = parse_stl("g1 U[2,7] g2", kS3);
    CHECK(format_stl(rewrite_until(g)) == "(G[0,7] g1 & F[2,7] g2)");
    Formula id = parse_stl("G[0,5] g1", kS3);
    CHECK(rewrite_until(id).same_node(id));
}

TEST_CASE("rewrite_eventually: keep rule") {
    Formula f = parse_stl("F[0,30](Left & g1)", kS3);
    CHECK(format_stl(rewrite_eventually(f)) == "(G[0,30] Left & F[0,30] g1)");

    DecomposeOptions keep_first;
    keep_first.keep = DecomposeOptions::EventuallyKeep::First;
    CHECK(format_stl(rewrite_eventually(f, keep_first)) == "(F[0,30] Left & G[0,30] g1)");

    Formula single = parse_stl("F[0,5] g1", kS3);
    CHECK(rewrite_eventually(single).same_node(single));
}

TEST_CASE("decompose: scenario-3 level listings") {
    Formula f = s3_original();

    auto l0 = decompose(f, {0});
    CHECK(l0.items.size() == 6);
    CHECK(texts(l0) == std::vector<std::string>{
                           "G[0,30] (! O1)", "G[0,30] (! Right)", "F[0,30] (Left & g1)",
                           "F[0,30] (Left & g2)", "(! t1 U[0,30] g2)",
                           "G[0,30] ((Left & rd1) | rd2)"});
    CHECK(l0.all_exact());

    auto l1 = decompose(f, {1});
    CHECK(l1.items.size() == 7);
    CHECK(texts(l1) == std::vector<std::string>{
                           "G[0,30] (! O1)", "G[0,30] (! Right)", "F[0,30] (Left & g1)",
                           "F[0,30] (Left & g2)", "G[0,30] (! t1)", "F[0,30] g2",
                           "G[0,30] ((Left & rd1) | rd2)"});
    CHECK(!l1.all_exact());

    auto l2 = decompose(f, {2});
    CHECK(l2.items.size() == 7);
    CHECK(texts(l2) == std::vector<std::string>{
                           "G[0,30] (! O1)", "G[0,30] (! Right)", "G[0,30] Left", "F[0,30] g1",
                           "F[0,30] g2", "G[0,30] (! t1)", "G[0,30] ((Left & rd1) | rd2)"});
}

TEST_CASE("decompose: provenance resolves against the original AST") {
    Formula f = s3_original();
    for (int level = 0; level <= 2; ++level) {
        auto set = decompose(f, {level});
        std::set<std::string> paths;
        for (const auto& e : set.items) {
            const Formula* node = resolve_path(f, e.origin.path);
            REQUIRE(node != nullptr);
            std::string key;
            for (int i : e.origin.path) key += std::to_string(i) + ".";
            CHECK(paths.insert(key).second);  // unique
        }
    }
}

TEST_CASE("decompose: provenance of random formulas resolves") {
    oracle::FormulaGen gen(5150);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen.gen(5);
        for (int level = 0; level <= 2; ++level) {
            auto set = decompose(f, {level});
            for (const auto& e : set.items)
                CHECK(resolve_path(f, e.origin.path) != nullptr);
        }
    }
}

TEST_CASE("decompose: idempotence") {
    Formula f = s3_original();
    for (int level = 0; level <= 2; ++level) {
        auto once = decompose(f, {level});
        auto twice = decompose(once.conjunction(), {level});
        CHECK(texts(once) == texts(twice));
    }
}

TEST_CASE("level-0 robustness equals the original exactly") {
    oracle::FormulaGen gen(31337);
    Scenario sc = dummy_scenario();
    int with_splits = 0;
    for (int i = 0; i < 1000; ++i) {
        Formula f = gen.gen(4);
        auto set = decompose(f, {0});
        int need = oracle::horizon_samples(f, 1.0);
        Trajectory t;
        t.dt = 1.0;
        t.samples = gen.signal(need + 2);
        double orig = robustness(t, 0, f, sc);
        CHECK(min_rho(set, t, sc) == orig);  // exact, not approximate
        if (set.items.size() > 1) ++with_splits;
    }
    CHECK(with_splits > 200);
}

TEST_CASE("levels 1-2 are conservative on random draws") {
    oracle::FormulaGen gen(90210);
    Scenario sc = dummy_scenario();
    int positive_cases = 0;
    for (int i = 0; i < 1000; ++i) {
        Formula f = gen.gen(4);
        int need = oracle::horizon_samples(f, 1.0);
        Trajectory t;
        t.dt = 1.0;
        t.samples = gen.signal(need + 2);
        double orig = robustness(t, 0, f, sc);
        for (int level = 1; level <= 2; ++level) {
            auto set = decompose(f, {level});
            // decomposition only increases the horizon need via G[0,b]
            int need2 = 0;
            for (const auto& e : set.items)
                need2 = std::max(need2, oracle::horizon_samples(e.formula, 1.0));
            if (need2 > need) {
                Trajectory t2 = t;
                while (static_cast<int>(t2.samples.size()) < need2 + 2)
                    t2.samples.push_back(t2.samples.back());
                t2.samples.resize(static_cast<std::size_t>(need2 + 2));
                // keep it simple: re-evaluate both on the padded signal
                double o2 = robustness(t2, 0, f, sc);
                double d2 = min_rho(set, t2, sc);
                if (d2 > 0) {
                    CHECK(o2 > 0);
                    ++positive_cases;
                }
            } else {
                double dec = min_rho(set, t, sc);
                if (dec > 0) {
                    CHECK(orig > 0);
                    ++positive_cases;
                }
            }
        }
    }
    CHECK(positive_cases > 100);
}

TEST_CASE("conservativeness is real: constructed converse counterexamples") {
    Scenario sc = dummy_scenario();
    auto geq = [](double c) {
        LinearForm lf;
        lf.coeffs = {1.0};
        lf.bound = c;
        lf.sense = Sense::Geq;
        return Formula::atom("p", lf);
    };

    // p U[0,2] q satisfied at t=0 (q holds immediately) but G[0,2]p fails.
    Formula until_f = Formula::until(geq(0.5), {0, 2}, geq(0.5));
    Trajectory t;
    t.dt = 1.0;
    t.samples = {{1.0}, {-1.0}, {-1.0}, {-1.0}};
    CHECK(robustness(t, 0, until_f, sc) > 0);
    auto set1 = decompose(until_f, {1});
    CHECK(min_rho(set1, t, sc) < 0);

    // F[0,2](p & q) satisfied at the last sample, G[0,2]p fails earlier.
    Formula ev = Formula::eventually({0, 2}, Formula::conj({geq(0.5), geq(-2.0)}));
    Trajectory t2;
    t2.dt = 1.0;
    t2.samples = {{-1.0}, {-1.0}, {1.0}, {1.0}};
    CHECK(robustness(t2, 0, ev, sc) > 0);
    auto set2 = decompose(ev, {2});
    CHECK(min_rho(set2, t2, sc) < 0);
}

TEST_CASE("negated temporal operators pass through unrewritten") {
    Formula f = parse_stl("!(G[0,5] g1) & F[0,5] g2", kS3);
    auto set = decompose(f, {2});
    REQUIRE(set.items.size() == 2);
    CHECK(format_stl(set.items[0].formula) == "! (G[0,5] g1)");
}

TEST_CASE("disjunctions are never split") {
    Formula f = parse_stl("G[0,5](g1 | g2) & (F[0,5] g1 | G[0,5] g2)", kS3);
    auto set = decompose(f, {2});
    CHECK(set.items.size() == 2);
}
