#include "sff/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sff {

using json = nlohmann::ordered_json;

double Region::field_value(std::span<const double> x) const {
    switch (shape) {
        case Shape::Box: {
            // Exact signed distance to the box over the axes it constrains.
            double outside_sq = 0.0;
            double inside = -1e300;
            for (std::size_t i = 0; i < box.size(); ++i) {
                if (i >= x.size())
                    throw DimensionMismatch("region '" + name + "' constrains axis " +
                                            std::to_string(i) + " beyond the state");
                double q = std::max(box[i][0] - x[i], x[i] - box[i][1]);
                if (q > 0.0) outside_sq += q * q;
                inside = std::max(inside, q);
            }
            if (outside_sq > 0.0) return std::sqrt(outside_sq);
            return inside;  // <= 0 inside, 0 on the boundary
        }
        case Shape::Halfspace: {
            if (coeffs.size() > x.size())
                throw DimensionMismatch("region '" + name + "' coefficient length " +
                                        std::to_string(coeffs.size()) + " exceeds state size");
            double v = -bound;
            for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * x[i];
            return v;
        }
        case Shape::Nonlinear:
            throw NonlinearAtom(name, raw);
    }
    return 0.0;
}

const Region* Scenario::find_region(const std::string& rname) const {
    for (const auto& r : regions)
        if (r.name == rname) return &r;
    return nullptr;
}

const Region& Scenario::region(const std::string& rname) const {
    const Region* r = find_region(rname);
    if (!r) throw RegionUnresolved(rname);
    return *r;
}

std::set<std::string> Scenario::predicate_names() const {
    std::set<std::string> names;
    for (const auto& r : regions) names.insert(r.name);
    return names;
}

std::vector<const Region*> Scenario::blocking_regions() const {
    std::vector<const Region*> out;
    for (const auto& r : regions)
        if (r.kind == RegionKind::Obstacle || r.kind == RegionKind::Zone) out.push_back(&r);
    return out;
}

// ── JSON loading ────────────────────────────────────────────────────────────

namespace {

RegionKind parse_kind(const std::string& s, const std::string& ptr) {
    if (s == "obstacle") return RegionKind::Obstacle;
    if (s == "goal") return RegionKind::Goal;
    if (s == "zone") return RegionKind::Zone;
    if (s == "region") return RegionKind::Plain;
    throw SchemaError(ptr, "unknown region kind '" + s + "'");
}

const json& need(const json& j, const char* key, const std::string& ptr) {
    if (!j.contains(key)) throw SchemaError(ptr + "/" + key, "missing required field");
    return j.at(key);
}

std::vector<std::array<double, 2>> parse_axis_pairs(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw SchemaError(ptr, "expected an array of [lo, hi] pairs");
    std::vector<std::array<double, 2>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw SchemaError(ptr + "/" + std::to_string(i), "expected [lo, hi]");
        double lo = p[0].get<double>(), hi = p[1].get<double>();
        if (!(lo <= hi))
            throw SchemaError(ptr + "/" + std::to_string(i), "lo must not exceed hi");
        out.push_back({lo, hi});
    }
    return out;
}

}  // namespace

Scenario parse_scenario_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError("/", std::string("invalid JSON: ") + e.what());
    }

    Scenario s;
    s.name = need(j, "name", "").get<std::string>();
    s.workspace = parse_axis_pairs(need(j, "workspace", ""), "/workspace");

    const json& regions = need(j, "regions", "");
    if (!regions.is_object()) throw SchemaError("/regions", "expected an object");
    for (auto it = regions.begin(); it != regions.end(); ++it) {
        const std::string ptr = "/regions/" + it.key();
        const json& rj = it.value();
        Region r;
        r.name = it.key();
        r.kind = parse_kind(need(rj, "kind", ptr).get<std::string>(), ptr + "/kind");
        if (rj.contains("box")) {
            r.shape = Region::Shape::Box;
            r.box = parse_axis_pairs(rj.at("box"), ptr + "/box");
        } else if (rj.contains("halfspace")) {
            r.shape = Region::Shape::Halfspace;
            const json& h = rj.at("halfspace");
            const json& a = need(h, "a", ptr + "/halfspace");
            if (!a.is_array()) throw SchemaError(ptr + "/halfspace/a", "expected an array");
            for (const auto& v : a) r.coeffs.push_back(v.get<double>());
            r.bound = need(h, "b", ptr + "/halfspace").get<double>();
        } else {
            throw SchemaError(ptr, "region needs 'box' or 'halfspace'");
        }
        if (rj.contains("window")) {
            const json& w = rj.at("window");
            if (!w.is_array() || w.size() != 2)
                throw SchemaError(ptr + "/window", "expected [t_on, t_off]");
            double on = w[0].get<double>(), off = w[1].get<double>();
            if (!(on <= off)) throw SchemaError(ptr + "/window", "t_on must not exceed t_off");
            r.window = {{on, off}};
        }
        s.regions.push_back(std::move(r));
    }

    const json& dyn = need(j, "dynamics", "");
    s.dynamics.model = need(dyn, "model", "/dynamics").get<std::string>();
    if (dyn.contains("v_max")) s.dynamics.v_max = dyn.at("v_max").get<double>();
    if (dyn.contains("a_max")) s.dynamics.a_max = dyn.at("a_max").get<double>();
    if (dyn.contains("disturbance"))
        s.dynamics.disturbance = parse_axis_pairs(dyn.at("disturbance"), "/dynamics/disturbance");

    const json& x0 = need(j, "x0", "");
    if (!x0.is_array()) throw SchemaError("/x0", "expected an array");
    for (const auto& v : x0) s.x0.push_back(v.get<double>());

    s.horizon_s = need(j, "horizon_s", "").get<double>();
    s.dt_s = need(j, "dt_s", "").get<double>();

    const json& grid = need(j, "grid", "");
    if (!grid.is_array()) throw SchemaError("/grid", "expected an array of point counts");
    for (const auto& v : grid) s.grid_points.push_back(v.get<int>());

    // ── invariants ──────────────────────────────────────────────────────
    if (s.horizon_s <= 0) throw ValidationError("horizon_s must be positive");
    if (s.dt_s <= 0) throw ValidationError("dt_s must be positive");
    double ratio = s.horizon_s / s.dt_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ValidationError("dt_s must divide horizon_s");
    const std::size_t pos_dims = s.workspace.size();
    for (std::size_t d = 0; d < pos_dims && d < s.x0.size(); ++d) {
        if (s.x0[d] < s.workspace[d][0] || s.x0[d] > s.workspace[d][1])
            throw ValidationError("x0 lies outside the workspace on axis " + std::to_string(d));
    }
    for (const auto& r : s.regions) {
        if (r.shape != Region::Shape::Box) continue;
        for (std::size_t d = 0; d < r.box.size() && d < pos_dims; ++d) {
            if (r.box[d][0] < s.workspace[d][0] - 1e-9 || r.box[d][1] > s.workspace[d][1] + 1e-9)
                throw ValidationError("region '" + r.name + "' exceeds the workspace on axis " +
                                      std::to_string(d));
        }
    }
    if (s.grid_points.size() < pos_dims)
        throw ValidationError("grid must give a point count per workspace axis");
    for (int n : s.grid_points)
        if (n < 3) throw ValidationError("grid needs at least 3 points per axis");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str());
}

}  // namespace sff
