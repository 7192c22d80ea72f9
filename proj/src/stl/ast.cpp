#include "sff/stl/ast.hpp"

#include <charconv>
#include <cmath>

namespace sff::stl {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::True: return "True";
        case NodeKind::Atom: return "Atom";
        case NodeKind::Not: return "Not";
        case NodeKind::And: return "And";
        case NodeKind::Or: return "Or";
        case NodeKind::Until: return "Until";
        case NodeKind::Eventually: return "Eventually";
        case NodeKind::Always: return "Always";
    }
    return "?";
}

const std::shared_ptr<const Node>& Formula::default_node() {
    static const std::shared_ptr<const Node> t = std::make_shared<Node>();
    return t;
}

Formula Formula::wrap(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

static void check_interval(const Interval& i) {
    if (!(i.a >= 0.0) || !(i.b >= i.a)) throw BadInterval(i.a, i.b);
}

Formula Formula::truth() { return Formula(); }

Formula Formula::atom(std::string name) {
    Node n;
    n.kind = NodeKind::Atom;
    n.atom.name = std::move(name);
    return wrap(std::move(n));
}

Formula Formula::atom(std::string name, LinearForm form) {
    Node n;
    n.kind = NodeKind::Atom;
    n.atom.name = std::move(name);
    n.atom.linear = std::move(form);
    return wrap(std::move(n));
}

Formula Formula::negate(Formula f) {
    Node n;
    n.kind = NodeKind::Not;
    n.children.push_back(std::move(f));
    return wrap(std::move(n));
}

Formula Formula::conj(std::vector<Formula> children) {
    if (children.empty()) throw Error("And requires at least one child");
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.kind() == NodeKind::And)
            for (const auto& gc : c.children()) flat.push_back(gc);
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat.front();
    Node n;
    n.kind = NodeKind::And;
    n.children = std::move(flat);
    return wrap(std::move(n));
}

Formula Formula::disj(std::vector<Formula> children) {
    if (children.empty()) throw Error("Or requires at least one child");
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.kind() == NodeKind::Or)
            for (const auto& gc : c.children()) flat.push_back(gc);
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat.front();
    Node n;
    n.kind = NodeKind::Or;
    n.children = std::move(flat);
    return wrap(std::move(n));
}

Formula Formula::until(Formula lhs, Interval i, Formula rhs) {
    check_interval(i);
    Node n;
    n.kind = NodeKind::Until;
    n.interval = i;
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return wrap(std::move(n));
}

Formula Formula::eventually(Interval i, Formula f) {
    check_interval(i);
    Node n;
    n.kind = NodeKind::Eventually;
    n.interval = i;
    n.children.push_back(std::move(f));
    return wrap(std::move(n));
}

Formula Formula::always(Interval i, Formula f) {
    check_interval(i);
    Node n;
    n.kind = NodeKind::Always;
    n.interval = i;
    n.children.push_back(std::move(f));
    return wrap(std::move(n));
}

bool structural_equal(const Formula& a, const Formula& b) {
    if (a.same_node(b)) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case NodeKind::True: return true;
        case NodeKind::Atom: {
            if (a.atom().name != b.atom().name) return false;
            const auto &la = a.atom().linear, &lb = b.atom().linear;
            if (la.has_value() != lb.has_value()) return false;
            if (la && (la->coeffs != lb->coeffs || la->bound != lb->bound || la->sense != lb->sense))
                return false;
            return true;
        }
        case NodeKind::Until:
        case NodeKind::Eventually:
        case NodeKind::Always:
            if (a.interval().a != b.interval().a || a.interval().b != b.interval().b) return false;
            [[fallthrough]];
        default: break;
    }
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!structural_equal(a.child(i), b.child(i))) return false;
    return true;
}

// ── printer ─────────────────────────────────────────────────────────────────

static std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

static std::string print(const Formula& f);

// Argument of a prefix operator: atoms and `true` stay bare, already
// parenthesized forms (And/Or/Until) stay as printed, everything else gets
// parentheses.
static std::string wrap_arg(const Formula& f) {
    std::string s = print(f);
    if (f.kind() == NodeKind::Atom || f.kind() == NodeKind::True) return s;
    if (!s.empty() && s.front() == '(') return s;
    return "(" + s + ")";
}

static std::string print(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::True: return "true";
        case NodeKind::Atom: return f.atom().name;
        case NodeKind::Not: return "! " + wrap_arg(f.child(0));
        case NodeKind::Always:
            return "G[" + format_number(f.interval().a) + "," + format_number(f.interval().b) +
                   "] " + wrap_arg(f.child(0));
        case NodeKind::Eventually:
            return "F[" + format_number(f.interval().a) + "," + format_number(f.interval().b) +
                   "] " + wrap_arg(f.child(0));
        case NodeKind::Until:
            return "(" + print(f.child(0)) + " U[" + format_number(f.interval().a) + "," +
                   format_number(f.interval().b) + "] " + print(f.child(1)) + ")";
        case NodeKind::And: {
            std::string s = "(";
            for (std::size_t i = 0; i < f.arity(); ++i) {
                if (i) s += " & ";
                s += print(f.child(i));
            }
            return s + ")";
        }
        case NodeKind::Or: {
            std::string s = "(";
            for (std::size_t i = 0; i < f.arity(); ++i) {
                if (i) s += " | ";
                s += print(f.child(i));
            }
            return s + ")";
        }
    }
    return "?";
}

std::string format_stl(const Formula& f) { return print(f); }

const Formula* resolve_path(const Formula& f, const std::vector<int>& path) {
    const Formula* cur = &f;
    for (int idx : path) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= cur->arity()) return nullptr;
        cur = &cur->child(static_cast<std::size_t>(idx));
    }
    return cur;
}

}  // namespace sff::stl
