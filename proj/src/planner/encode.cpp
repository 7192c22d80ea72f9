#include "sff/planner/encode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace sff::planner {

using stl::Formula;
using stl::NodeKind;

namespace {

// Combinator value: a variable index or a folded constant.
struct ZRef {
    int var = -1;
    int constant = -1;  // 0 or 1 when var < 0
    bool is_const() const { return var < 0; }
    static ZRef of_var(int v) { return {v, -1}; }
    static ZRef of_const(int c) { return {-1, c}; }
};

struct Encoder {
    const dynamics::DynamicsModel& model;
    const Scenario& scenario;
    int N;
    double dt;
    const CostSpec& cost;
    EncodeResult out;

    std::vector<std::array<double, 2>> state_box;
    std::map<std::string, ZRef> atom_memo;                      // key: signature@k
    std::map<std::pair<const void*, int>, ZRef> combo_memo;     // (node, k)
    int combo_counter = 0;

    int x_var(int k, int d) const {
        return out.x_index[static_cast<std::size_t>(k * out.state_dim + d)];
    }

    int idx_of(double seconds) const { return static_cast<int>(std::lround(seconds / dt)); }

    // Big-M for a halfspace a·x <= b over the state box: twice the largest
    // violation magnitude at a box vertex, plus one.
    double big_m(const std::vector<std::pair<int, double>>& terms_dims, double b) const {
        double mx = -b, mn = -b;
        for (const auto& [d, a] : terms_dims) {
            mx += std::max(a * state_box[static_cast<std::size_t>(d)][0],
                           a * state_box[static_cast<std::size_t>(d)][1]);
            mn += std::min(a * state_box[static_cast<std::size_t>(d)][0],
                           a * state_box[static_cast<std::size_t>(d)][1]);
        }
        return 2.0 * std::max(std::abs(mx), std::abs(mn)) + 1.0;
    }

    // Binary z with the big-M pair: z = 1 iff a·x(k) <= b (boundary shared).
    // Halfspaces the state box already decides fold to constants.
    ZRef halfspace(const std::vector<std::pair<int, double>>& dims_coeffs, double b, int k,
                   const std::string& name) {
        {
            double mx = 0.0, mn = 0.0;
            for (const auto& [d, a] : dims_coeffs) {
                mx += std::max(a * state_box[static_cast<std::size_t>(d)][0],
                               a * state_box[static_cast<std::size_t>(d)][1]);
                mn += std::min(a * state_box[static_cast<std::size_t>(d)][0],
                               a * state_box[static_cast<std::size_t>(d)][1]);
            }
            if (mx <= b) return ZRef::of_const(1);
            if (mn > b) return ZRef::of_const(0);
        }
        const double M = big_m(dims_coeffs, b);
        int z = out.model.add_var("z_" + name + "_" + std::to_string(k), 0, 1, true);
        std::vector<std::pair<int, double>> terms;
        for (const auto& [d, a] : dims_coeffs) terms.push_back({x_var(k, d), a});
        PredicateInfo info;
        info.var = z;
        info.terms = terms;
        info.rhs = b;
        out.predicates.push_back(std::move(info));

        auto upper = terms;
        upper.push_back({z, M});
        out.model.add_row("bm_u_" + name + "_" + std::to_string(k), std::move(upper),
                          RowSense::Le, b + M);
        auto lower = terms;
        lower.push_back({z, M});
        out.model.add_row("bm_l_" + name + "_" + std::to_string(k), std::move(lower),
                          RowSense::Ge, b);
        out.model.n_bigm_rows += 2;
        return ZRef::of_var(z);
    }

    ZRef combinator_and(std::vector<ZRef> parts, const std::string& name) {
        std::vector<int> vars;
        for (const ZRef& p : parts) {
            if (p.is_const()) {
                if (p.constant == 0) return ZRef::of_const(0);
                continue;  // true conjunct drops out
            }
            vars.push_back(p.var);
        }
        if (vars.empty()) return ZRef::of_const(1);
        if (vars.size() == 1) return ZRef::of_var(vars[0]);
        int z = out.model.add_var("z_" + name, 0, 1, false);
        std::vector<std::pair<int, double>> sum{{z, -1.0}};
        for (int v : vars) {
            out.model.add_row(name + "_le", {{z, 1.0}, {v, -1.0}}, RowSense::Le, 0.0);
            sum.push_back({v, 1.0});
        }
        out.model.add_row(name + "_ge", std::move(sum), RowSense::Le,
                          static_cast<double>(vars.size()) - 1.0);
        out.combinators.push_back({CombinatorInfo::Op::And, z, vars});
        return ZRef::of_var(z);
    }

    ZRef combinator_or(std::vector<ZRef> parts, const std::string& name) {
        std::vector<int> vars;
        for (const ZRef& p : parts) {
            if (p.is_const()) {
                if (p.constant == 1) return ZRef::of_const(1);
                continue;
            }
            vars.push_back(p.var);
        }
        if (vars.empty()) return ZRef::of_const(0);
        if (vars.size() == 1) return ZRef::of_var(vars[0]);
        int z = out.model.add_var("z_" + name, 0, 1, false);
        std::vector<std::pair<int, double>> sum{{z, 1.0}};
        for (int v : vars) {
            out.model.add_row(name + "_ge", {{z, 1.0}, {v, -1.0}}, RowSense::Ge, 0.0);
            sum.push_back({v, -1.0});
        }
        out.model.add_row(name + "_le", std::move(sum), RowSense::Le, 0.0);
        out.combinators.push_back({CombinatorInfo::Op::Or, z, vars});
        return ZRef::of_var(z);
    }

    ZRef combinator_not(ZRef child, const std::string& name) {
        if (child.is_const()) return ZRef::of_const(1 - child.constant);
        int z = out.model.add_var("z_" + name, 0, 1, false);
        out.model.add_row(name + "_eq", {{z, 1.0}, {child.var, 1.0}}, RowSense::Eq, 1.0);
        out.combinators.push_back({CombinatorInfo::Op::Not, z, {child.var}});
        return ZRef::of_var(z);
    }

    ZRef atom(const stl::AtomicPredicate& a, int k) {
        std::string key = a.name;
        if (a.linear) {
            key += "#lin";
            for (double c : a.linear->coeffs) key += "_" + std::to_string(c);
            key += "#" + std::to_string(a.linear->bound) +
                   (a.linear->sense == stl::Sense::Geq ? "#ge" : "#le");
        }
        key += "@" + std::to_string(k);
        auto it = atom_memo.find(key);
        if (it != atom_memo.end()) return it->second;

        ZRef z;
        if (a.linear) {
            std::vector<std::pair<int, double>> dims;
            for (std::size_t d = 0; d < a.linear->coeffs.size(); ++d) {
                double c = a.linear->coeffs[d];
                if (a.linear->sense == stl::Sense::Geq) c = -c;
                if (c != 0.0) dims.push_back({static_cast<int>(d), c});
            }
            const double b =
                a.linear->sense == stl::Sense::Geq ? -a.linear->bound : a.linear->bound;
            z = halfspace(dims, b, k, a.name);
        } else {
            const Region& r = scenario.region(a.name);
            if (r.is_nonlinear()) throw NonlinearAtom(a.name, r.raw);
            if (!r.active(k * dt)) {
                z = ZRef::of_const(0);  // absent region: never inside
            } else if (r.shape == Region::Shape::Halfspace) {
                std::vector<std::pair<int, double>> dims;
                for (std::size_t d = 0; d < r.coeffs.size(); ++d)
                    if (r.coeffs[d] != 0.0) dims.push_back({static_cast<int>(d), r.coeffs[d]});
                z = halfspace(dims, r.bound, k, a.name);
            } else {
                // box membership: conjunction of per-axis halfspace pairs
                std::vector<ZRef> parts;
                for (std::size_t d = 0; d < r.box.size(); ++d) {
                    parts.push_back(halfspace({{static_cast<int>(d), -1.0}}, -r.box[d][0], k,
                                              a.name + "_lo" + std::to_string(d)));
                    parts.push_back(halfspace({{static_cast<int>(d), 1.0}}, r.box[d][1], k,
                                              a.name + "_hi" + std::to_string(d)));
                }
                z = combinator_and(std::move(parts),
                                   "c" + std::to_string(combo_counter++) + "_" + a.name + "_" +
                                       std::to_string(k));
            }
        }
        atom_memo.emplace(key, z);
        return z;
    }

    ZRef encode_node(const Formula& f, int k, int subformula) {
        if (f.kind() == NodeKind::True) return ZRef::of_const(1);
        if (f.kind() == NodeKind::Atom) return atom(f.atom(), k);

        auto memo_key = std::make_pair(static_cast<const void*>(&f.interval()), k);
        // shared_ptr identity: the node address is stable for shared subtrees
        auto it = combo_memo.find(memo_key);
        if (it != combo_memo.end()) return it->second;

        const std::string tag =
            "s" + std::to_string(subformula) + "n" + std::to_string(combo_counter++) + "_" +
            std::to_string(k);
        ZRef z;
        switch (f.kind()) {
            case NodeKind::Not:
                z = combinator_not(encode_node(f.child(0), k, subformula), tag);
                break;
            case NodeKind::And: {
                std::vector<ZRef> parts;
                for (const auto& c : f.children()) parts.push_back(encode_node(c, k, subformula));
                z = combinator_and(std::move(parts), tag);
                break;
            }
            case NodeKind::Or: {
                std::vector<ZRef> parts;
                for (const auto& c : f.children()) parts.push_back(encode_node(c, k, subformula));
                z = combinator_or(std::move(parts), tag);
                break;
            }
            case NodeKind::Always:
            case NodeKind::Eventually: {
                const int lo = k + idx_of(f.interval().a), hi = k + idx_of(f.interval().b);
                if (hi > N)
                    throw HorizonTooShort("window of " + stl::format_stl(f) + " needs step " +
                                          std::to_string(hi) + " of " + std::to_string(N));
                std::vector<ZRef> parts;
                for (int t = lo; t <= hi; ++t)
                    parts.push_back(encode_node(f.child(0), t, subformula));
                z = f.kind() == NodeKind::Always ? combinator_and(std::move(parts), tag)
                                                 : combinator_or(std::move(parts), tag);
                break;
            }
            case NodeKind::Until: {
                const int lo = k + idx_of(f.interval().a), hi = k + idx_of(f.interval().b);
                if (hi > N)
                    throw HorizonTooShort("window of " + stl::format_stl(f) + " needs step " +
                                          std::to_string(hi) + " of " + std::to_string(N));
                std::vector<ZRef> switches;
                for (int tp = lo; tp <= hi; ++tp) {
                    std::vector<ZRef> parts{encode_node(f.child(1), tp, subformula)};
                    for (int ts = k; ts <= tp; ++ts)
                        parts.push_back(encode_node(f.child(0), ts, subformula));
                    ZRef sw = combinator_and(std::move(parts), tag + "_sw" + std::to_string(tp));
                    if (!sw.is_const()) ++out.model.n_until_switch_vars;
                    switches.push_back(sw);
                }
                z = combinator_or(std::move(switches), tag);
                break;
            }
            default:
                throw Error("unexpected node in encode");
        }
        combo_memo.emplace(memo_key, z);
        return z;
    }
};

}  // namespace

EncodeResult encode(const stl::SubformulaSet& subformulas, const dynamics::DynamicsModel& model,
                    const Scenario& scenario, std::span<const double> x0, int n_steps, double dt,
                    const CostSpec& cost) {
    Encoder enc{model, scenario, n_steps, dt, cost, {}, {}, {}, {}, 0};
    EncodeResult& out = enc.out;
    out.n_steps = n_steps;
    out.dt = dt;
    out.state_dim = model.state_dim();
    out.control_dim = model.control_dim();

    const auto d = model.discrete(dt);
    enc.state_box = model.state_bounds(scenario.workspace);
    const auto u_box = model.control_bounds();
    if (static_cast<int>(x0.size()) != out.state_dim)
        throw DimensionMismatch("x0 dimension vs model state");

    // state, control and cost-slack variables
    for (int k = 0; k <= n_steps; ++k)
        for (int dim = 0; dim < out.state_dim; ++dim)
            out.x_index.push_back(out.model.add_var(
                "x_" + std::to_string(k) + "_" + std::to_string(dim),
                enc.state_box[static_cast<std::size_t>(dim)][0],
                enc.state_box[static_cast<std::size_t>(dim)][1]));
    std::vector<int> s_index;
    for (int k = 0; k < n_steps; ++k)
        for (int dim = 0; dim < out.control_dim; ++dim) {
            out.u_index.push_back(out.model.add_var(
                "u_" + std::to_string(k) + "_" + std::to_string(dim),
                u_box[static_cast<std::size_t>(dim)][0], u_box[static_cast<std::size_t>(dim)][1]));
            double smax = std::max(std::abs(u_box[static_cast<std::size_t>(dim)][0]),
                                   std::abs(u_box[static_cast<std::size_t>(dim)][1]));
            s_index.push_back(out.model.add_var(
                "s_" + std::to_string(k) + "_" + std::to_string(dim), 0.0, smax));
        }

    // x(0) = x0
    for (int dim = 0; dim < out.state_dim; ++dim)
        out.model.add_row("x0_" + std::to_string(dim),
                          {{out.x_index[static_cast<std::size_t>(dim)], 1.0}}, RowSense::Eq,
                          x0[static_cast<std::size_t>(dim)]);

    // dynamics x(k+1) = A x(k) + B u(k)
    for (int k = 0; k < n_steps; ++k)
        for (int i = 0; i < out.state_dim; ++i) {
            std::vector<std::pair<int, double>> terms{
                {out.x_index[static_cast<std::size_t>((k + 1) * out.state_dim + i)], 1.0}};
            for (int j = 0; j < out.state_dim; ++j) {
                double a = d.A[static_cast<std::size_t>(i * out.state_dim + j)];
                if (a != 0.0)
                    terms.push_back(
                        {out.x_index[static_cast<std::size_t>(k * out.state_dim + j)], -a});
            }
            for (int j = 0; j < out.control_dim; ++j) {
                double b = d.B[static_cast<std::size_t>(i * out.control_dim + j)];
                if (b != 0.0)
                    terms.push_back(
                        {out.u_index[static_cast<std::size_t>(k * out.control_dim + j)], -b});
            }
            out.model.add_row("dyn_" + std::to_string(k) + "_" + std::to_string(i),
                              std::move(terms), RowSense::Eq, 0.0);
        }

    // |u| <= s and the (optionally perturbed) l1 objective
    for (int k = 0; k < n_steps; ++k)
        for (int dim = 0; dim < out.control_dim; ++dim) {
            int u = out.u_index[static_cast<std::size_t>(k * out.control_dim + dim)];
            int s = s_index[static_cast<std::size_t>(k * out.control_dim + dim)];
            out.model.add_row("abs_p_" + std::to_string(k) + "_" + std::to_string(dim),
                              {{u, 1.0}, {s, -1.0}}, RowSense::Le, 0.0);
            out.model.add_row("abs_n_" + std::to_string(k) + "_" + std::to_string(dim),
                              {{u, -1.0}, {s, -1.0}}, RowSense::Le, 0.0);
            double w = 1.0;
            if (cost.perturb)
                w += cost.perturb_scale *
                     static_cast<double>(k * out.control_dim + dim + 1) /
                     static_cast<double>(n_steps * out.control_dim);
            out.model.objective[static_cast<std::size_t>(s)] = w;
        }

    int rho = -1;
    if (cost.maximize_robustness) {
        rho = out.model.add_var("rho", 0.0, 1.0);
        out.model.objective[static_cast<std::size_t>(rho)] = -1.0;
    }

    // Travel lower bounds (single integrators only): every trajectory that
    // must eventually visit a box has per-axis total variation at least the
    // line distance from x0, and at least the better of the two visiting
    // orders for each pair of boxes. Total variation is exactly
    // sum_k dt*|u_d(k)| here, which the cost slacks dominate. These rows
    // only strengthen the relaxation; the feasible set is unchanged.
    if (model.name().rfind("single_integrator", 0) == 0) {
        auto must_visit_box =
            [&](const Formula& f) -> std::optional<std::vector<std::array<double, 2>>> {
            const Formula* body = nullptr;
            if (f.kind() == NodeKind::Eventually) body = &f.child(0);
            else if (f.kind() == NodeKind::Until)
                body = &f.child(1);
            else
                return std::nullopt;
            // intersect the positively required box atoms; a superset of the
            // true target keeps the bound valid
            std::vector<std::array<double, 2>> box(enc.state_box.begin(), enc.state_box.end());
            bool found = false;
            auto visit = [&](auto&& self, const Formula& g) -> void {
                if (g.kind() == NodeKind::Atom && !g.atom().linear) {
                    const Region& r = scenario.region(g.atom().name);
                    if (r.shape == Region::Shape::Box) {
                        for (std::size_t d = 0; d < r.box.size() && d < box.size(); ++d) {
                            box[d][0] = std::max(box[d][0], r.box[d][0]);
                            box[d][1] = std::min(box[d][1], r.box[d][1]);
                        }
                        found = true;
                    }
                } else if (g.kind() == NodeKind::And) {
                    for (const auto& c : g.children()) self(self, c);
                }
            };
            visit(visit, *body);
            if (!found) return std::nullopt;
            return box;
        };

        auto gap = [](double lo_a, double hi_a, double lo_b, double hi_b) {
            return std::max(0.0, std::max(lo_a, lo_b) - std::min(hi_a, hi_b));
        };

        std::vector<std::vector<std::array<double, 2>>>& targets = out.visit_targets;
        auto collect_targets = [&](auto&& self, const Formula& g) -> void {
            if (g.kind() == NodeKind::And) {
                for (const auto& c : g.children()) self(self, c);
                return;
            }
            if (auto box = must_visit_box(g)) targets.push_back(*box);
        };
        for (const auto& item : subformulas.items) collect_targets(collect_targets, item.formula);

        for (int dim = 0; dim < out.control_dim; ++dim) {
            double bound = 0.0;
            const double p0 = x0[static_cast<std::size_t>(dim)];
            for (const auto& t : targets)
                bound = std::max(bound, gap(p0, p0, t[static_cast<std::size_t>(dim)][0],
                                            t[static_cast<std::size_t>(dim)][1]));
            for (std::size_t a = 0; a < targets.size(); ++a)
                for (std::size_t b = a + 1; b < targets.size(); ++b) {
                    const auto& ta = targets[a][static_cast<std::size_t>(dim)];
                    const auto& tb = targets[b][static_cast<std::size_t>(dim)];
                    double ab = gap(p0, p0, ta[0], ta[1]) + gap(ta[0], ta[1], tb[0], tb[1]);
                    double ba = gap(p0, p0, tb[0], tb[1]) + gap(tb[0], tb[1], ta[0], ta[1]);
                    bound = std::max(bound, std::min(ab, ba));
                }
            if (bound <= 0.0) continue;
            std::vector<std::pair<int, double>> terms;
            for (int k = 0; k < n_steps; ++k)
                terms.push_back({s_index[static_cast<std::size_t>(k * out.control_dim + dim)],
                                 dt});
            out.model.add_row("travel_" + std::to_string(dim), std::move(terms), RowSense::Ge,
                              bound);
        }

        // Joint rows: the L1 tour bound for each target pair couples the
        // axes under one visiting order, which the per-axis rows cannot.
        auto l1_from_point = [&](const std::vector<std::array<double, 2>>& t) {
            double d = 0.0;
            for (int dim = 0; dim < out.control_dim; ++dim)
                d += gap(x0[static_cast<std::size_t>(dim)], x0[static_cast<std::size_t>(dim)],
                         t[static_cast<std::size_t>(dim)][0], t[static_cast<std::size_t>(dim)][1]);
            return d;
        };
        auto l1_between = [&](const std::vector<std::array<double, 2>>& a,
                              const std::vector<std::array<double, 2>>& b) {
            double d = 0.0;
            for (int dim = 0; dim < out.control_dim; ++dim)
                d += gap(a[static_cast<std::size_t>(dim)][0], a[static_cast<std::size_t>(dim)][1],
                         b[static_cast<std::size_t>(dim)][0], b[static_cast<std::size_t>(dim)][1]);
            return d;
        };
        double joint = 0.0;
        for (std::size_t a = 0; a < targets.size(); ++a)
            for (std::size_t b = a + 1; b < targets.size(); ++b) {
                double tour = std::min(l1_from_point(targets[a]) + l1_between(targets[a], targets[b]),
                                       l1_from_point(targets[b]) + l1_between(targets[a], targets[b]));
                joint = std::max(joint, tour);
            }
        if (joint > 0.0) {
            std::vector<std::pair<int, double>> terms;
            for (std::size_t i = 0; i < s_index.size(); ++i)
                terms.push_back({s_index[i], dt});
            out.model.add_row("travel_joint", std::move(terms), RowSense::Ge, joint);
        }
    }

    // Pre-instantiate every referenced atom over every step in a canonical
    // order (scenario region order, then first-occurrence linear atoms), so
    // differently decomposed encodings of the same mission share identical
    // predicate variable indices.
    {
        std::vector<const stl::AtomicPredicate*> mentioned;
        auto collect_atoms = [&](auto&& self, const Formula& g) -> void {
            if (g.kind() == NodeKind::Atom) {
                for (const auto* a : mentioned)
                    if (a->name == g.atom().name && a->linear.has_value() == g.atom().linear.has_value())
                        return;
                mentioned.push_back(&g.atom());
                return;
            }
            for (const auto& c : g.children()) self(self, c);
        };
        for (const auto& item : subformulas.items) collect_atoms(collect_atoms, item.formula);
        std::stable_sort(mentioned.begin(), mentioned.end(),
                         [&](const stl::AtomicPredicate* a, const stl::AtomicPredicate* b) {
                             auto rank = [&](const stl::AtomicPredicate* p) {
                                 for (std::size_t r = 0; r < scenario.regions.size(); ++r)
                                     if (!p->linear && scenario.regions[r].name == p->name)
                                         return static_cast<int>(r);
                                 return static_cast<int>(scenario.regions.size());
                             };
                             return rank(a) < rank(b);
                         });
        for (const auto* a : mentioned)
            for (int k = 0; k <= n_steps; ++k) enc.atom(*a, k);
    }

    // subformula roots hold at step 0
    for (std::size_t i = 0; i < subformulas.items.size(); ++i) {
        ZRef z = enc.encode_node(subformulas.items[i].formula, 0, static_cast<int>(i));
        if (z.is_const()) {
            out.root_vars.push_back(-1);
            if (z.constant == 0)
                out.model.add_row("root_s" + std::to_string(i) + "_unsat", {}, RowSense::Eq, 1.0);
        } else {
            out.root_vars.push_back(z.var);
            out.model.add_row("root_s" + std::to_string(i), {{z.var, 1.0}}, RowSense::Eq, 1.0);
        }
    }

    // optional robustness margin: tighten every predicate pair by rho
    if (rho >= 0) {
        for (auto& r : out.model.rows) {
            if (r.name.rfind("bm_u_", 0) == 0) r.terms.push_back({rho, 1.0});
            if (r.name.rfind("bm_l_", 0) == 0) r.terms.push_back({rho, -1.0});
        }
    }
    return enc.out;
}

}  // namespace sff::planner
