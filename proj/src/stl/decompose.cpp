#include "sff/stl/decompose.hpp"

#include <set>

namespace sff::stl {

bool SubformulaSet::all_exact() const {
    for (const auto& e : items)
        if (!e.origin.exact) return false;
    return true;
}

Formula SubformulaSet::conjunction() const {
    std::vector<Formula> fs;
    fs.reserve(items.size());
    for (const auto& e : items) fs.push_back(e.formula);
    return Formula::conj(std::move(fs));
}

std::vector<Formula> SubformulaSet::formulas() const {
    std::vector<Formula> fs;
    fs.reserve(items.size());
    for (const auto& e : items) fs.push_back(e.formula);
    return fs;
}

Formula rewrite_always(const Formula& f) {
    if (f.kind() != NodeKind::Always || f.child(0).kind() != NodeKind::And) return f;
    std::vector<Formula> parts;
    for (const auto& c : f.child(0).children()) parts.push_back(Formula::always(f.interval(), c));
    return Formula::conj(std::move(parts));
}

Formula rewrite_until(const Formula& f) {
    if (f.kind() != NodeKind::Until) return f;
    Interval hold{0.0, f.interval().b};
    return Formula::conj({Formula::always(hold, f.child(0)),
                          Formula::eventually(f.interval(), f.child(1))});
}

static std::size_t keep_index(const DecomposeOptions& opts, std::size_t n) {
    switch (opts.keep) {
        case DecomposeOptions::EventuallyKeep::First: return 0;
        case DecomposeOptions::EventuallyKeep::Last: return n - 1;
        case DecomposeOptions::EventuallyKeep::Index:
            return static_cast<std::size_t>(
                std::min<int>(std::max(opts.keep_index, 0), static_cast<int>(n) - 1));
    }
    return n - 1;
}

Formula rewrite_eventually(const Formula& f, const DecomposeOptions& opts) {
    if (f.kind() != NodeKind::Eventually || f.child(0).kind() != NodeKind::And) return f;
    const auto& children = f.child(0).children();
    const std::size_t keep = keep_index(opts, children.size());
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i == keep)
            parts.push_back(Formula::eventually(f.interval(), children[i]));
        else
            parts.push_back(Formula::always(f.interval(), children[i]));
    }
    return Formula::conj(std::move(parts));
}

namespace {

// Temporal wrapper above a piece's core, outermost first.
struct Wrapper {
    NodeKind kind;  // Always or Eventually
    Interval interval;
};

// A decomposition piece: `wraps` applied outside-in around `core`, where
// `core` is the original subtree found at `path`.
struct Piece {
    std::vector<Wrapper> wraps;
    Formula core;
    std::vector<int> path;
};

Formula rebuild(const std::vector<Wrapper>& wraps, Formula core) {
    Formula f = std::move(core);
    for (auto it = wraps.rbegin(); it != wraps.rend(); ++it)
        f = it->kind == NodeKind::Always ? Formula::always(it->interval, std::move(f))
                                         : Formula::eventually(it->interval, std::move(f));
    return f;
}

struct Worker {
    int level;
    const DecomposeOptions& opts;
    std::vector<SubformulaEntry> out;

    // Exhaustive rewriting inside contexts that never surface as separate
    // conjuncts (Or branches, unsplittable temporal children, until
    // operands). Conjunctions produced here stay embedded in the piece.
    Formula rewrite_inside(const Formula& f, std::vector<std::string>& tags, bool& exact) {
        switch (f.kind()) {
            case NodeKind::True:
            case NodeKind::Atom:
            case NodeKind::Not:  // rewriting under negation would flip conservativeness
                return f;
            case NodeKind::And:
            case NodeKind::Or: {
                std::vector<Formula> cs;
                cs.reserve(f.arity());
                bool changed = false;
                for (const auto& c : f.children()) {
                    Formula r = rewrite_inside(c, tags, exact);
                    changed = changed || !r.same_node(c);
                    cs.push_back(std::move(r));
                }
                if (!changed) return f;
                return f.kind() == NodeKind::And ? Formula::conj(std::move(cs))
                                                 : Formula::disj(std::move(cs));
            }
            case NodeKind::Always: {
                if (f.child(0).kind() == NodeKind::And) {
                    tags.push_back("split_always");
                    return rewrite_inside(rewrite_always(f), tags, exact);
                }
                Formula c = rewrite_inside(f.child(0), tags, exact);
                if (c.same_node(f.child(0))) return f;
                return rewrite_inside(Formula::always(f.interval(), std::move(c)), tags, exact);
            }
            case NodeKind::Eventually: {
                if (level >= 2 && f.child(0).kind() == NodeKind::And) {
                    tags.push_back("split_eventually");
                    exact = false;
                    return rewrite_inside(rewrite_eventually(f, opts), tags, exact);
                }
                Formula c = rewrite_inside(f.child(0), tags, exact);
                if (c.same_node(f.child(0))) return f;
                return rewrite_inside(Formula::eventually(f.interval(), std::move(c)), tags,
                                      exact);
            }
            case NodeKind::Until: {
                if (level >= 1) {
                    tags.push_back("split_until");
                    exact = false;
                    return rewrite_inside(rewrite_until(f), tags, exact);
                }
                Formula l = rewrite_inside(f.child(0), tags, exact);
                Formula r = rewrite_inside(f.child(1), tags, exact);
                if (l.same_node(f.child(0)) && r.same_node(f.child(1))) return f;
                return rewrite_inside(Formula::until(std::move(l), f.interval(), std::move(r)),
                                      tags, exact);
            }
        }
        return f;
    }

    void finalize(Piece p, std::vector<std::string> tags, bool exact) {
        bool inner_exact = true;
        Formula core = rewrite_inside(p.core, tags, inner_exact);
        out.push_back(SubformulaEntry{
            rebuild(p.wraps, std::move(core)),
            Origin{std::move(p.path), std::move(tags), exact && inner_exact}});
    }

    void process(Piece p, std::vector<std::string> tags, bool exact);

    // A conjunction of sub-pieces sitting under `outer` wrappers; `and_path`
    // is the original node the conjunction derives from (used when the
    // pieces cannot be separated and stay one subformula).
    void handle_and(std::vector<Wrapper> outer, std::vector<Piece> parts,
                    std::vector<int> and_path, std::vector<std::string> tags, bool exact) {
        if (parts.size() == 1) {
            Piece& q = parts.front();
            std::vector<Wrapper> wraps = std::move(outer);
            wraps.insert(wraps.end(), q.wraps.begin(), q.wraps.end());
            process(Piece{std::move(wraps), std::move(q.core), std::move(q.path)},
                    std::move(tags), exact);
            return;
        }
        if (outer.empty()) {
            for (auto& q : parts) process(std::move(q), tags, exact);
            return;
        }
        const Wrapper w = outer.back();
        outer.pop_back();
        if (w.kind == NodeKind::Always) {
            // G[a,b](p1 & .. & pk) -> G[a,b]p1 & .. & G[a,b]pk; the
            // conjunction floats up one wrapper layer.
            tags.push_back("split_always");
            for (auto& q : parts) q.wraps.insert(q.wraps.begin(), w);
            handle_and(std::move(outer), std::move(parts), std::move(and_path), std::move(tags),
                       exact);
            return;
        }
        if (w.kind == NodeKind::Eventually && level >= 2) {
            // F[a,b](p1 & .. & pk) -> held conjuncts become G, the designated
            // one stays F (semantics-changing conservative rewrite).
            tags.push_back("split_eventually");
            const std::size_t keep = keep_index(opts, parts.size());
            for (std::size_t i = 0; i < parts.size(); ++i) {
                Wrapper wi = w;
                if (i != keep) wi.kind = NodeKind::Always;
                parts[i].wraps.insert(parts[i].wraps.begin(), wi);
            }
            handle_and(std::move(outer), std::move(parts), std::move(and_path), std::move(tags),
                       false);
            return;
        }
        // The conjunction is stuck under an Eventually (level < 2): the
        // whole thing stays a single subformula.
        outer.push_back(w);
        std::vector<Formula> inner;
        inner.reserve(parts.size());
        for (auto& q : parts) inner.push_back(rebuild(q.wraps, std::move(q.core)));
        finalize(Piece{std::move(outer), Formula::conj(std::move(inner)), std::move(and_path)},
                 std::move(tags), exact);
    }
};

void Worker::process(Piece p, std::vector<std::string> tags, bool exact) {
    switch (p.core.kind()) {
        case NodeKind::And: {
            std::vector<Piece> parts;
            parts.reserve(p.core.arity());
            for (std::size_t i = 0; i < p.core.arity(); ++i) {
                auto cp = p.path;
                cp.push_back(static_cast<int>(i));
                parts.push_back(Piece{{}, p.core.child(i), std::move(cp)});
            }
            handle_and(std::move(p.wraps), std::move(parts), std::move(p.path), std::move(tags),
                       exact);
            return;
        }
        case NodeKind::Always:
        case NodeKind::Eventually: {
            p.wraps.push_back(Wrapper{p.core.kind(), p.core.interval()});
            Formula child = p.core.child(0);
            p.path.push_back(0);
            p.core = std::move(child);
            process(std::move(p), std::move(tags), exact);
            return;
        }
        case NodeKind::Until: {
            if (level >= 1) {
                tags.push_back("split_until");
                const Interval i = p.core.interval();
                std::vector<Piece> parts;
                auto pl = p.path;
                pl.push_back(0);
                parts.push_back(Piece{{Wrapper{NodeKind::Always, Interval{0.0, i.b}}},
                                      p.core.child(0), std::move(pl)});
                auto pr = p.path;
                pr.push_back(1);
                parts.push_back(Piece{{Wrapper{NodeKind::Eventually, i}}, p.core.child(1),
                                      std::move(pr)});
                handle_and(std::move(p.wraps), std::move(parts), std::move(p.path),
                           std::move(tags), false);
                return;
            }
            finalize(std::move(p), std::move(tags), exact);
            return;
        }
        default:
            finalize(std::move(p), std::move(tags), exact);
            return;
    }
}

}  // namespace

SubformulaSet decompose(const Formula& f, DecompositionLevel level, const DecomposeOptions& opts) {
    if (level.level < 0 || level.level > 2)
        throw Error("decomposition level must be 0, 1 or 2");
    Worker w{level.level, opts, {}};
    w.process(Piece{{}, f, {}}, {}, true);

    SubformulaSet set;
    set.original = f;
    set.level = level.level;
    for (auto& e : w.out) {
        bool dup = false;
        for (const auto& kept : set.items)
            if (structural_equal(kept.formula, e.formula)) {
                dup = true;
                break;
            }
        if (!dup) set.items.push_back(std::move(e));
    }
    return set;
}

}  // namespace sff::stl
