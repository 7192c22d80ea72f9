#include "sff/feedback/translate.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "sff/stl/parser.hpp"

namespace sff::feedback {

namespace {

int axis_of(const std::string& var) {
    if (var == "x") return 0;
    if (var == "y") return 1;
    if (var == "vx") return 2;
    if (var == "vy") return 3;
    return -1;
}

struct Comparison {
    int axis;
    char op;  // '<' (<=), '>' (>=), '=' (==)
    double value;
};

// One conjunct: "x >= 1", "1 <= x <= 4", "9 <= x", "x == 9". Parentheses
// and strict comparisons are accepted (strictness drops at authoring
// resolution). Returns nothing when the text does not fit this shape.
std::optional<std::vector<Comparison>> parse_conjunct(std::string s) {
    // strip outer parentheses and whitespace
    auto trim = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(0, 1);
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    };
    trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        s = s.substr(1, s.size() - 2);
        trim(s);
    }
    // tokenize: operand op operand [op operand]
    std::vector<std::string> operands;
    std::vector<std::string> ops;
    std::size_t i = 0;
    auto read_operand = [&]() -> std::optional<std::string> {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '.' ||
                                s[i] == '-' || s[i] == '+' || s[i] == '_'))
            ++i;
        if (i == start) return std::nullopt;
        return s.substr(start, i - start);
    };
    auto read_op = [&]() -> std::optional<std::string> {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) return std::nullopt;
        if (s[i] == '<' || s[i] == '>' || s[i] == '=') {
            std::string op(1, s[i]);
            ++i;
            if (i < s.size() && s[i] == '=') {
                op += '=';
                ++i;
            }
            return op;
        }
        return std::nullopt;
    };
    auto first = read_operand();
    if (!first) return std::nullopt;
    operands.push_back(*first);
    while (true) {
        std::size_t before = i;
        auto op = read_op();
        if (!op) {
            i = before;
            break;
        }
        auto operand = read_operand();
        if (!operand) return std::nullopt;
        ops.push_back(*op);
        operands.push_back(*operand);
    }
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i != s.size()) return std::nullopt;
    if (ops.empty() || ops.size() > 2) return std::nullopt;

    auto as_number = [](const std::string& t) -> std::optional<double> {
        try {
            std::size_t pos = 0;
            double v = std::stod(t, &pos);
            if (pos != t.size()) return std::nullopt;
            return v;
        } catch (...) {
            return std::nullopt;
        }
    };

    std::vector<Comparison> out;
    auto add = [&](const std::string& var, const std::string& op, double value,
                   bool flipped) -> bool {
        int axis = axis_of(var);
        if (axis < 0) return false;
        char c;
        if (op == "<" || op == "<=") c = flipped ? '>' : '<';
        else if (op == ">" || op == ">=") c = flipped ? '<' : '>';
        else if (op == "=" || op == "==") c = '=';
        else return false;
        out.push_back({axis, c, value});
        return true;
    };

    if (ops.size() == 1) {
        auto lhs_num = as_number(operands[0]);
        auto rhs_num = as_number(operands[1]);
        if (!lhs_num && rhs_num) {
            if (!add(operands[0], ops[0], *rhs_num, false)) return std::nullopt;
        } else if (lhs_num && !rhs_num) {
            if (!add(operands[1], ops[0], *lhs_num, true)) return std::nullopt;
        } else {
            return std::nullopt;
        }
        return out;
    }
    // chained: num op var op num
    auto lo = as_number(operands[0]);
    auto hi = as_number(operands[2]);
    if (!lo || !hi) return std::nullopt;
    if (!add(operands[1], ops[0], *lo, true)) return std::nullopt;
    if (!add(operands[1], ops[1], *hi, false)) return std::nullopt;
    return out;
}

}  // namespace

Region parse_predicate_definition(const std::string& name, const std::string& definition,
                                  const Scenario& scenario) {
    Region r;
    r.name = name;
    r.kind = RegionKind::Plain;

    std::vector<Comparison> comparisons;
    std::size_t start = 0;
    bool ok = true;
    int depth = 0;
    for (std::size_t i = 0; i <= definition.size() && ok; ++i) {
        if (i < definition.size() && definition[i] == '(') ++depth;
        if (i < definition.size() && definition[i] == ')') --depth;
        if (i == definition.size() || (definition[i] == '&' && depth == 0)) {
            std::string part = definition.substr(start, i - start);
            start = i + 1;
            if (part.find_first_not_of(" \t") == std::string::npos) continue;
            auto parsed = parse_conjunct(part);
            if (!parsed) {
                ok = false;
                break;
            }
            for (const auto& c : *parsed) comparisons.push_back(c);
        }
    }
    if (!ok || comparisons.empty()) {
        r.shape = Region::Shape::Nonlinear;
        r.raw = definition;
        return r;
    }

    if (comparisons.size() == 1 && comparisons[0].op != '=') {
        // single inequality: a halfspace
        const Comparison& c = comparisons[0];
        r.shape = Region::Shape::Halfspace;
        r.coeffs.assign(static_cast<std::size_t>(c.axis) + 1, 0.0);
        r.coeffs[static_cast<std::size_t>(c.axis)] = c.op == '<' ? 1.0 : -1.0;
        r.bound = c.op == '<' ? c.value : -c.value;
        return r;
    }

    int max_axis = 0;
    for (const auto& c : comparisons) max_axis = std::max(max_axis, c.axis);
    r.shape = Region::Shape::Box;
    for (int a = 0; a <= max_axis; ++a) {
        double lo = a < static_cast<int>(scenario.workspace.size())
                        ? scenario.workspace[static_cast<std::size_t>(a)][0]
                        : -1e9;
        double hi = a < static_cast<int>(scenario.workspace.size())
                        ? scenario.workspace[static_cast<std::size_t>(a)][1]
                        : 1e9;
        r.box.push_back({lo, hi});
    }
    for (const auto& c : comparisons) {
        auto& b = r.box[static_cast<std::size_t>(c.axis)];
        if (c.op == '<') b[1] = std::min(b[1], c.value);
        if (c.op == '>') b[0] = std::max(b[0], c.value);
        if (c.op == '=') b = {c.value, c.value};
    }
    for (auto& b : r.box)
        if (b[0] > b[1]) {
            r.shape = Region::Shape::Nonlinear;  // contradictory definition
            r.raw = definition;
            return r;
        }
    return r;
}

std::string describe_map(const Scenario& scenario) {
    std::ostringstream out;
    out << "Mission map '" << scenario.name << "', workspace";
    for (const auto& w : scenario.workspace) out << " [" << w[0] << "," << w[1] << "]";
    out << ". Regions:";
    for (const auto& r : scenario.regions) {
        out << " " << r.name << "(";
        switch (r.kind) {
            case RegionKind::Obstacle: out << "obstacle"; break;
            case RegionKind::Goal: out << "goal"; break;
            case RegionKind::Zone: out << "zone"; break;
            case RegionKind::Plain: out << "region"; break;
        }
        if (r.shape == Region::Shape::Box) {
            out << ",";
            for (const auto& b : r.box) out << " [" << b[0] << "," << b[1] << "]";
        }
        out << ")";
    }
    out << ". Horizon " << scenario.horizon_s << " s, dt " << scenario.dt_s << " s.";
    return out.str();
}

TranslationResult translate(TranslatorAdapter& adapter, const std::string& nl_command,
                            const std::string& map_description, const Scenario& scenario) {
    AdapterRequest req;
    req.system = map_description +
                 " Answer with a JSON object {\"stl_formula\": ..., "
                 "\"atomic_predicates\": {name: definition, ...}}.";
    req.user = nl_command;
    std::string raw = adapter.complete(req);

    // lenient extraction: the first balanced JSON object in the body
    auto start = raw.find('{');
    if (start == std::string::npos)
        throw TranslationError(raw, "no JSON object in adapter output");
    int depth = 0;
    std::size_t end = start;
    bool in_string = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
        char c = raw[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        if (c == '{') ++depth;
        if (c == '}' && --depth == 0) {
            end = i;
            break;
        }
    }
    if (depth != 0) throw TranslationError(raw, "unbalanced JSON object in adapter output");

    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(raw.substr(start, end - start + 1));
    } catch (const std::exception& e) {
        throw TranslationError(raw, std::string("JSON parse failure: ") + e.what());
    }

    TranslationResult result;
    result.raw = raw;
    if (doc.contains("stl_formula")) result.stl_formula = doc["stl_formula"].get<std::string>();
    else if (doc.contains("STL_formula"))
        result.stl_formula = doc["STL_formula"].get<std::string>();
    else
        throw TranslationError(raw, "missing stl_formula field");
    if (doc.contains("atomic_predicates") && doc["atomic_predicates"].is_object()) {
        for (auto it = doc["atomic_predicates"].begin(); it != doc["atomic_predicates"].end();
             ++it)
            result.atomic_predicates.push_back(
                {it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                  : it.value().dump()});
    }

    // Link: scenario regions take precedence (the map is shared knowledge);
    // only names the scenario does not define take the translated geometry.
    result.augmented_scenario = scenario;
    for (const auto& [name, definition] : result.atomic_predicates) {
        if (result.augmented_scenario.find_region(name)) continue;
        result.augmented_scenario.regions.push_back(
            parse_predicate_definition(name, definition, scenario));
    }
    try {
        result.linked = stl::parse_stl(result.stl_formula,
                                       result.augmented_scenario.predicate_names());
    } catch (const Error& e) {
        throw TranslationError(raw, e.what());
    }
    return result;
}

std::string translation_to_json(const TranslationResult& t) {
    nlohmann::ordered_json j;
    j["stl_formula"] = t.stl_formula;
    nlohmann::ordered_json preds = nlohmann::ordered_json::object();
    for (const auto& [name, definition] : t.atomic_predicates) preds[name] = definition;
    j["atomic_predicates"] = std::move(preds);
    j["canonical"] = stl::format_stl(t.linked);
    return j.dump(2);
}

}  // namespace sff::feedback
