#pragma once

// Abstract syntax tree for signal temporal logic formulas.
//
// Formulas are immutable values sharing subtrees through shared_ptr. The
// constructors canonicalize: nested And/Or of the same kind are flattened
// into a single n-ary node and singleton And/Or collapse to their child, so
// evaluation order over children is deterministic (left to right, as stored).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sff/errors.hpp"

namespace sff::stl {

enum class NodeKind { True, Atom, Not, And, Or, Until, Eventually, Always };

const char* node_kind_name(NodeKind k);

// Time interval of a temporal operator, in seconds. 0 <= a <= b.
struct Interval {
    double a = 0.0;
    double b = 0.0;
};

enum class Sense { Leq, Geq };

// Explicit linear predicate a·x {<=,>=} b over the state vector. Atoms carry
// one of these only when constructed programmatically; parsed atoms are
// name references resolved against the active scenario.
struct LinearForm {
    std::vector<double> coeffs;
    double bound = 0.0;
    Sense sense = Sense::Leq;
};

struct AtomicPredicate {
    std::string name;
    std::optional<LinearForm> linear;  // empty: region reference by name
};

class Formula;

struct Node {
    NodeKind kind = NodeKind::True;
    AtomicPredicate atom;           // Atom only
    Interval interval;              // Until / Eventually / Always
    std::vector<Formula> children;  // Not: 1, And/Or: >= 2, Until: 2
};

class Formula {
  public:
    Formula() = default;

    NodeKind kind() const { return node_->kind; }
    const AtomicPredicate& atom() const { return node_->atom; }
    const Interval& interval() const { return node_->interval; }
    const std::vector<Formula>& children() const { return node_->children; }
    const Formula& child(std::size_t i) const { return node_->children.at(i); }
    std::size_t arity() const { return node_->children.size(); }

    bool is(NodeKind k) const { return node_->kind == k; }
    bool same_node(const Formula& other) const { return node_ == other.node_; }

    // ── factories ───────────────────────────────────────────────────────
    static Formula truth();
    static Formula atom(std::string name);
    static Formula atom(std::string name, LinearForm form);
    static Formula negate(Formula f);
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);
    static Formula until(Formula lhs, Interval i, Formula rhs);
    static Formula eventually(Interval i, Formula f);
    static Formula always(Interval i, Formula f);

  private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula wrap(Node n);

    std::shared_ptr<const Node> node_ = default_node();
    static const std::shared_ptr<const Node>& default_node();
};

// Structural equality (names, forms, intervals, shape).
bool structural_equal(const Formula& a, const Formula& b);

// Canonical text in the module grammar; parse(format(f)) is structurally
// equal to f.
std::string format_stl(const Formula& f);

// Resolves the child-index path of a node within f (provenance support).
// Returns nullptr when the path does not index a node.
const Formula* resolve_path(const Formula& f, const std::vector<int>& path);

}  // namespace sff::stl
