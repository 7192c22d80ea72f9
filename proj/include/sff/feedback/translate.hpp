#pragma once

// Natural-language -> STL boundary. The adapter returns raw text carrying a
// JSON object {"stl_formula": ..., "atomic_predicates": {...}}; the result
// is parsed against the scenario's regions extended by the translated
// predicate table. Identifiers already named by the scenario resolve to the
// scenario's regions (the mission map is shared, authoritative knowledge);
// only new names take the translation's geometry. Unparseable predicate
// definitions become nonlinear regions that surface as NonlinearAtom when a
// check touches them, so translation variance is observable rather than
// fatal.

#include <string>
#include <vector>

#include "sff/feedback/adapter.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/ast.hpp"

namespace sff::feedback {

struct TranslationResult {
    std::string stl_formula;
    std::vector<std::pair<std::string, std::string>> atomic_predicates;  // name -> definition
    stl::Formula linked;
    Scenario augmented_scenario;  // scenario plus translated predicates
    std::string raw;              // adapter output, for operator inspection
};

// Parses a predicate definition ("x >= 1 & x <= 3 & y >= 4 & y <= 5",
// "(1 <= x <= 4) & (3 <= y <= 5)", "x == 9 & y == 1", "x <= 0", ...) into a
// region; anything beyond conjunctions of axis comparisons is Nonlinear.
Region parse_predicate_definition(const std::string& name, const std::string& definition,
                                  const Scenario& scenario);

// Runs the adapter and parses + links its output.
// Throws AdapterUnavailable and TranslationError (carrying the raw text).
TranslationResult translate(TranslatorAdapter& adapter, const std::string& nl_command,
                            const std::string& map_description, const Scenario& scenario);

// The default map description sent to live adapters.
std::string describe_map(const Scenario& scenario);

std::string translation_to_json(const TranslationResult& t);

}  // namespace sff::feedback
