#pragma once

// Rewrite-based decomposition into a conjunction of subformulas:
//
//   always      G[a,b](p1 & .. & pk)  ->  G[a,b]p1 & .. & G[a,b]pk   (exact)
//   until       p U[a,b] q            ->  G[0,b]p & F[a,b]q          (conservative)
//   eventually  F[a,b](p1 & .. & pk)  ->  G[a,b]p1 & .. & F[a,b]p_keep (conservative)
//
// Level 0 applies only the always rule, level 1 adds until, level 2 adds
// eventually. Rules recurse through monotone contexts (And, Or, temporal
// children) until no rule fires; negated subtrees pass through untouched,
// since rewriting under a negation would flip the conservative direction.

#include <string>
#include <vector>

#include "sff/stl/ast.hpp"

namespace sff::stl {

struct DecompositionLevel {
    int level = 1;  // 0, 1 or 2
};

// Which conjunct stays under F when splitting eventually-over-and.
struct DecomposeOptions {
    enum class EventuallyKeep { First, Last, Index };
    EventuallyKeep keep = EventuallyKeep::Last;
    int keep_index = 0;  // used when keep == Index
};

struct Origin {
    std::vector<int> path;              // child-index path into the original AST
    std::vector<std::string> rewrites;  // rule tags in application order
    bool exact = true;                  // only exact rewrites above this subformula
};

struct SubformulaEntry {
    Formula formula;
    Origin origin;
};

struct SubformulaSet {
    Formula original;
    int level = 0;
    std::vector<SubformulaEntry> items;

    bool all_exact() const;
    Formula conjunction() const;
    std::vector<Formula> formulas() const;
};

// Single-rule rewrites; identity when the root does not match.
Formula rewrite_always(const Formula& f);
Formula rewrite_until(const Formula& f);
Formula rewrite_eventually(const Formula& f, const DecomposeOptions& opts = {});

// Applies the level's rule set to fixpoint and splits the top-level
// conjunction. Structurally equal subformulas are deduplicated, keeping the
// first occurrence's provenance.
SubformulaSet decompose(const Formula& f, DecompositionLevel level,
                        const DecomposeOptions& opts = {});

}  // namespace sff::stl
