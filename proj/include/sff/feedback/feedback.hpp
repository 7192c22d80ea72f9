#pragma once

// Structured, human-readable feedback from a feasibility report. The
// templates are deterministic; an adapter may paraphrase the rendered text
// but any adapter failure falls back to it, so feedback never blocks the
// pipeline.

#include <optional>
#include <string>
#include <vector>

#include "sff/feedback/adapter.hpp"
#include "sff/filter.hpp"

namespace sff::feedback {

struct FeedbackEntry {
    std::string formula;
    std::string reason;                // report reason code
    std::vector<std::string> regions;  // names involved in the subformula
    std::optional<double> nearest_feasible_distance;
    std::string text;
};

struct StructuredFeedback {
    filter::Decision decision = filter::Decision::Reject;
    std::vector<FeedbackEntry> entries;  // one per infeasible subformula
    std::string rendered;
};

StructuredFeedback build_feedback(const filter::FeasibilityReport& report,
                                  const Scenario& scenario);

// Adapter polish of the rendered text; returns fb.rendered on any failure.
std::string paraphrase(const StructuredFeedback& fb, TranslatorAdapter& adapter);

std::string feedback_to_json(const StructuredFeedback& fb);

}  // namespace sff::feedback
