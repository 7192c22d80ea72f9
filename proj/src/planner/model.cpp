#include "sff/planner/model.hpp"

#include <cstdio>

namespace sff::planner {

int MilpModel::add_var(std::string name, double lo, double hi, bool binary) {
    vars.push_back(Var{std::move(name), lo, hi, binary});
    objective.push_back(0.0);
    return static_cast<int>(vars.size()) - 1;
}

int MilpModel::add_row(std::string name, std::vector<std::pair<int, double>> terms,
                       RowSense sense, double rhs) {
    rows.push_back(Row{std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
}

int MilpModel::n_binaries() const {
    int n = 0;
    for (const auto& v : vars)
        if (v.binary) ++n;
    return n;
}

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_terms(std::string& out, const std::vector<std::pair<int, double>>& terms,
                  const std::vector<Var>& vars) {
    bool first = true;
    for (const auto& [idx, coef] : terms) {
        if (coef == 0.0) continue;
        if (first) {
            out += coef < 0 ? "- " : "";
            out += num(std::abs(coef)) + " " + vars[static_cast<std::size_t>(idx)].name;
            first = false;
        } else {
            out += coef < 0 ? " - " : " + ";
            out += num(std::abs(coef)) + " " + vars[static_cast<std::size_t>(idx)].name;
        }
    }
    if (first) out += "0 " + vars[0].name;
}

}  // namespace

std::string export_lp(const MilpModel& m) {
    std::string out = "Minimize\n obj: ";
    {
        std::vector<std::pair<int, double>> obj_terms;
        for (std::size_t i = 0; i < m.objective.size(); ++i)
            if (m.objective[i] != 0.0) obj_terms.push_back({static_cast<int>(i), m.objective[i]});
        append_terms(out, obj_terms, m.vars);
    }
    out += "\nSubject To\n";
    for (const auto& r : m.rows) {
        out += " " + r.name + ": ";
        append_terms(out, r.terms, m.vars);
        switch (r.sense) {
            case RowSense::Le: out += " <= "; break;
            case RowSense::Ge: out += " >= "; break;
            case RowSense::Eq: out += " = "; break;
        }
        out += num(r.rhs) + "\n";
    }
    out += "Bounds\n";
    for (const auto& v : m.vars)
        out += " " + num(v.lo) + " <= " + v.name + " <= " + num(v.hi) + "\n";
    bool any_bin = false;
    for (const auto& v : m.vars) any_bin = any_bin || v.binary;
    if (any_bin) {
        out += "Binaries\n";
        for (const auto& v : m.vars)
            if (v.binary) out += " " + v.name + "\n";
    }
    out += "End\n";
    return out;
}

}  // namespace sff::planner
