#pragma once

// Scenario: workspace, named regions, dynamics selection, initial state,
// horizon and sampling period. Loaded from the JSON schema documented in the
// README; regions double as the geometry source for predicate fields.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sff/errors.hpp"

namespace sff {

enum class RegionKind { Obstacle, Goal, Zone, Plain };

// A named region. Boxes live over the leading state axes (positions);
// halfspaces/linear forms carry explicit coefficients. Nonlinear regions
// store the raw definition and refuse geometric queries — they exist so
// unlinkable translated predicates surface as NonlinearAtom at analysis
// time instead of failing the whole translation.
struct Region {
    enum class Shape { Box, Halfspace, Nonlinear };

    std::string name;
    RegionKind kind = RegionKind::Plain;
    Shape shape = Shape::Box;

    std::vector<std::array<double, 2>> box;  // per-axis [lo, hi]
    std::vector<double> coeffs;              // halfspace a·x <= b
    double bound = 0.0;
    std::string raw;  // nonlinear definition text

    // Optional activity window [t_on, t_off] in mission-relative seconds.
    // Outside the window the region is absent: obstacles stop blocking,
    // targets stop existing.
    std::optional<std::array<double, 2>> window;

    bool active(double t) const {
        return !window || (t >= (*window)[0] && t <= (*window)[1]);
    }

    // Signed-distance-style value, negative inside. Boxes use the exact
    // point-to-box distance, halfspaces the raw affine value a·x - b.
    double field_value(std::span<const double> x) const;

    bool is_nonlinear() const { return shape == Shape::Nonlinear; }
};

struct DynamicsSpec {
    std::string model;  // single_integrator_2d | double_integrator_2d | double_integrator_1d
    double v_max = 1.0;
    double a_max = 1.0;
    std::vector<std::array<double, 2>> disturbance;  // optional per-axis box
};

struct Scenario {
    std::string name;
    std::vector<std::array<double, 2>> workspace;  // per position axis [lo, hi]
    std::vector<Region> regions;                   // file order preserved
    DynamicsSpec dynamics;
    std::vector<double> x0;
    double horizon_s = 0.0;
    double dt_s = 0.0;
    std::vector<int> grid_points;  // per position axis

    const Region* find_region(const std::string& name) const;
    const Region& region(const std::string& name) const;  // throws RegionUnresolved
    std::set<std::string> predicate_names() const;

    // Obstacle-like regions (obstacles and zones); these are folded into
    // every reachability analysis as the map's hard constraints.
    std::vector<const Region*> blocking_regions() const;

    int steps() const { return static_cast<int>(horizon_s / dt_s + 0.5); }
};

// Parses and validates the scenario JSON schema. Throws SchemaError with the
// JSON-pointer path of the offending element, or ValidationError.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_json(const std::string& json_text);

}  // namespace sff
