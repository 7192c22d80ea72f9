#include "sff/feedback/feedback.hpp"

#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sff::feedback {

namespace {

using stl::Formula;
using stl::NodeKind;

void collect_regions(const Formula& f, const Scenario& sc, std::vector<std::string>& out,
                     std::set<std::string>& seen) {
    if (f.kind() == NodeKind::Atom && !f.atom().linear) {
        if (sc.find_region(f.atom().name) && seen.insert(f.atom().name).second)
            out.push_back(f.atom().name);
        return;
    }
    for (const auto& c : f.children()) collect_regions(c, sc, out, seen);
}

bool boxes_disjoint(const Region& a, const Region& b) {
    if (a.shape != Region::Shape::Box || b.shape != Region::Shape::Box) return false;
    for (std::size_t d = 0; d < std::min(a.box.size(), b.box.size()); ++d)
        if (a.box[d][1] < b.box[d][0] || b.box[d][1] < a.box[d][0]) return true;
    return false;
}

// "a, b and c"
std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
        out += names[i];
    }
    return out;
}

std::string format_seconds(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

StructuredFeedback build_feedback(const filter::FeasibilityReport& report,
                                  const Scenario& scenario) {
    StructuredFeedback fb;
    fb.decision = report.decision;
    if (report.decision == filter::Decision::Proceed) {
        fb.rendered = "Mission verified feasible at level " + std::to_string(report.level) +
                      "; proceeding to planning.";
        return fb;
    }

    std::ostringstream text;
    text << "Mission rejected at level " << report.level << ".";
    for (int idx : report.infeasible) {
        const auto& v = report.verdicts[static_cast<std::size_t>(idx)];
        FeedbackEntry entry;
        entry.formula = stl::format_stl(v.subformula);
        entry.reason = v.reason;
        entry.nearest_feasible_distance = v.nearest_feasible_distance;
        std::set<std::string> seen;
        collect_regions(v.subformula, scenario, entry.regions, seen);

        std::ostringstream line;
        if (v.verdict == filter::Verdict::Error) {
            line << "Subformula " << entry.formula << " could not be analyzed (" << v.reason
                 << "): " << v.error_message;
        } else if (v.verdict == filter::Verdict::InfeasibleEmptyBrt) {
            // conjunction of pairwise-disjoint regions: the classic
            // impossible-simultaneity case
            bool disjoint_pair = false;
            if (entry.regions.size() >= 2) {
                for (std::size_t i = 0; i + 1 < entry.regions.size() && !disjoint_pair; ++i)
                    for (std::size_t j = i + 1; j < entry.regions.size() && !disjoint_pair; ++j)
                        disjoint_pair = boxes_disjoint(scenario.region(entry.regions[i]),
                                                       scenario.region(entry.regions[j]));
            }
            if (disjoint_pair) {
                line << "Subformula " << entry.formula << " requires regions "
                     << join_names(entry.regions)
                     << " simultaneously, but they are disjoint and cannot be occupied at the "
                        "same time. Consider visiting them separately or removing one.";
            } else {
                line << "Subformula " << entry.formula
                     << " is unsatisfiable anywhere on the map: no state satisfies it at any "
                        "time, so no trajectory can.";
            }
        } else {
            line << "Subformula " << entry.formula << ": the goal "
                 << (entry.regions.empty() ? std::string("region") : join_names(entry.regions))
                 << " is unreachable from the start state within the time window (horizon "
                 << format_seconds(scenario.horizon_s) << " s).";
            if (entry.nearest_feasible_distance)
                line << " The nearest state from which it becomes feasible is about "
                     << format_seconds(std::round(*entry.nearest_feasible_distance * 100) / 100)
                     << " m away.";
        }
        entry.text = line.str();
        text << " " << entry.text;
        fb.entries.push_back(std::move(entry));
    }
    fb.rendered = text.str();
    return fb;
}

std::string paraphrase(const StructuredFeedback& fb, TranslatorAdapter& adapter) {
    try {
        AdapterRequest req;
        req.system =
            "Rewrite the following mission feedback for a human operator; keep every region "
            "name and the decision unchanged.";
        req.user = feedback_to_json(fb);
        std::string out = adapter.complete(req);
        if (out.empty()) return fb.rendered;
        return out;
    } catch (const std::exception& e) {
        std::cerr << "warning: paraphrase adapter failed (" << e.what()
                  << "); returning template text\n";
        return fb.rendered;
    }
}

std::string feedback_to_json(const StructuredFeedback& fb) {
    nlohmann::ordered_json j;
    j["decision"] = fb.decision == filter::Decision::Proceed ? "Proceed" : "Reject";
    j["rendered"] = fb.rendered;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : fb.entries) {
        nlohmann::ordered_json ej;
        ej["formula"] = e.formula;
        ej["reason"] = e.reason;
        ej["regions"] = e.regions;
        if (e.nearest_feasible_distance)
            ej["nearest_feasible_distance"] = *e.nearest_feasible_distance;
        ej["text"] = e.text;
        j["entries"].push_back(std::move(ej));
    }
    return j.dump(2);
}

}  // namespace sff::feedback
