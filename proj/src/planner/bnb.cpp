#include "sff/planner/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <iostream>
#include <queue>

#include "sff/dynamics/models.hpp"

namespace sff::planner {

namespace {

constexpr double kIntTol = 1e-7;

struct Node {
    std::vector<std::pair<int, bool>> fixings;
    double bound = -1e300;
    long id = 0;
};

struct BestBoundOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;                                // FIFO on ties
    }
};

}  // namespace

MilpResult solve_milp(const MilpModel& m, const SolveConfig& cfg, const RepairFn& repair,
                      const std::vector<double>* warm_start) {
    std::vector<std::array<double, 2>> base;
    base.reserve(m.vars.size());
    for (const auto& v : m.vars) base.push_back({v.lo, v.hi});
    std::vector<int> binaries;
    for (std::size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].binary) binaries.push_back(static_cast<int>(j));

    MilpResult result;
    bool have_incumbent = false;
    double incumbent = 1e300;
    std::vector<double> incumbent_x;
    if (warm_start) {
        incumbent = 0.0;
        for (std::size_t j = 0; j < m.objective.size(); ++j)
            incumbent += m.objective[j] * (*warm_start)[j];
        incumbent_x = *warm_start;
        have_incumbent = true;
    }

    std::deque<Node> dive;  // LIFO until the first incumbent
    std::priority_queue<Node, std::vector<Node>, BestBoundOrder> best;
    long next_id = 0;
    dive.push_back(Node{{}, -1e300, next_id++});

    long nodes = 0, lp_iters = 0;
    double root_bound = -1e300;
    const bool log = std::getenv("SFF_BNB_LOG") != nullptr;

    // The initial depth-first dive probes for an incumbent; if it has not
    // produced one within a node budget, the remaining frontier moves to
    // best-bound order, which the relaxation bound makes effective.
    const long dive_budget = 64;
    long dive_nodes = 0;
    auto pop_node = [&]() -> std::optional<Node> {
        if (dive_nodes >= dive_budget) {
            while (!dive.empty()) {
                best.push(dive.front());
                dive.pop_front();
            }
        }
        if (!dive.empty()) {
            ++dive_nodes;
            Node n = dive.back();
            dive.pop_back();
            return n;
        }
        if (!best.empty()) {
            Node n = best.top();
            best.pop();
            return n;
        }
        return std::nullopt;
    };

    while (auto node = pop_node()) {
        if (have_incumbent && node->bound >= incumbent - cfg.gap) continue;
        if (nodes >= cfg.max_nodes)
            throw IterationLimit("branch-and-bound exceeded " + std::to_string(cfg.max_nodes) +
                                 " nodes");
        ++nodes;

        auto bounds = base;
        for (const auto& [j, one] : node->fixings) {
            bounds[static_cast<std::size_t>(j)][0] = one ? 1.0 : 0.0;
            bounds[static_cast<std::size_t>(j)][1] = one ? 1.0 : 0.0;
        }
        LpResult lp = solve_lp(m, bounds, cfg.max_lp_iters - lp_iters);
        lp_iters += lp.iterations;
        if (log && nodes % 25 == 0)
            std::cerr << "bnb: node " << nodes << " depth " << node->fixings.size()
                      << " lp_status " << static_cast<int>(lp.status) << " bound "
                      << (lp.status == LpStatus::Optimal ? lp.objective : 0.0) << " incumbent "
                      << (have_incumbent ? incumbent : 1e300) << " queue "
                      << dive.size() + best.size() << "\n";
        if (lp.status == LpStatus::IterLimit)
            throw IterationLimit("LP iteration budget exhausted");
        if (lp.status == LpStatus::Unbounded) throw Error("LP relaxation unbounded");
        if (lp.status == LpStatus::Infeasible) continue;

        // Monotone relaxation: a child's bound never undercuts its parent's.
        if (lp.objective < node->bound - 1e-6 && node->bound > -1e299)
            throw Error("relaxation bound decreased along a branch");
        if (nodes == 1) root_bound = lp.objective;
        if (have_incumbent && lp.objective >= incumbent - cfg.gap) continue;

        // integral already?
        int branch_var = -1;
        double best_frac = kIntTol;
        for (int j : binaries) {
            double v = lp.x[static_cast<std::size_t>(j)];
            double frac = std::abs(v - std::round(v));
            if (frac > best_frac) {
                best_frac = frac;
                branch_var = j;
            }
        }
        if (branch_var < 0) {
            incumbent = lp.objective;
            incumbent_x = lp.x;
            have_incumbent = true;
            while (!dive.empty()) {
                best.push(dive.front());
                dive.pop_front();
            }
            continue;
        }

        if (repair) {
            if (auto repaired = repair(lp.x)) {
                double obj = 0.0;
                for (std::size_t j = 0; j < m.objective.size(); ++j)
                    obj += m.objective[j] * (*repaired)[j];
                if (!have_incumbent || obj < incumbent) {
                    incumbent = obj;
                    incumbent_x = *repaired;
                    have_incumbent = true;
                    while (!dive.empty()) {
                        best.push(dive.front());
                        dive.pop_front();
                    }
                }
                // The repaired objective equals this node's bound, so the
                // subtree cannot improve on it.
                if (lp.objective >= incumbent - cfg.gap) continue;
            }
        }

        const double v = lp.x[static_cast<std::size_t>(branch_var)];
        Node hi = *node;
        hi.fixings.push_back({branch_var, true});
        hi.bound = lp.objective;
        Node lo = *node;
        lo.fixings.push_back({branch_var, false});
        lo.bound = lp.objective;
        hi.id = next_id++;
        lo.id = next_id++;
        if (!have_incumbent && dive_nodes < dive_budget) {
            // dive toward the nearest integer first (pushed last, popped first)
            if (v >= 0.5) {
                dive.push_back(lo);
                dive.push_back(hi);
            } else {
                dive.push_back(hi);
                dive.push_back(lo);
            }
        } else {
            best.push(hi);
            best.push(lo);
        }
    }

    if (!have_incumbent) throw InfeasibleModel("no integral solution exists");
    if (root_bound > incumbent + 1e-6)
        throw Error("root relaxation bound exceeds the reported optimum");
    result.objective = incumbent;
    result.x = std::move(incumbent_x);
    result.nodes = nodes;
    result.lp_iterations = lp_iters;
    result.root_bound = root_bound;
    return result;
}

namespace {

bool row_span_satisfied(const std::vector<Row>& rows, const std::vector<double>& x, double tol) {
    for (const auto& r : rows) {
        double acc = -r.rhs;
        for (const auto& [j, a] : r.terms) acc += a * x[static_cast<std::size_t>(j)];
        switch (r.sense) {
            case RowSense::Le:
                if (acc > tol) return false;
                break;
            case RowSense::Ge:
                if (acc < -tol) return false;
                break;
            case RowSense::Eq:
                if (std::abs(acc) > tol) return false;
                break;
        }
    }
    return true;
}

}  // namespace

RepairFn make_canonical_repair(const EncodeResult& enc) {
    // Copy what the callback needs; the EncodeResult may go out of scope.
    auto predicates = enc.predicates;
    auto combinators = enc.combinators;
    auto rows = enc.model.rows;
    return [predicates, combinators, rows](const std::vector<double>& lp_x)
               -> std::optional<std::vector<double>> {
        std::vector<double> x = lp_x;
        for (const auto& p : predicates) {
            double acc = -p.rhs;
            for (const auto& [j, a] : p.terms) acc += a * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(p.var)] = acc <= 1e-9 ? 1.0 : 0.0;
        }
        for (const auto& c : combinators) {  // children precede parents
            double v = 0.0;
            switch (c.op) {
                case CombinatorInfo::Op::And: {
                    v = 1.0;
                    for (int ch : c.child_vars)
                        v = std::min(v, x[static_cast<std::size_t>(ch)] > 0.5 ? 1.0 : 0.0);
                    break;
                }
                case CombinatorInfo::Op::Or: {
                    v = 0.0;
                    for (int ch : c.child_vars)
                        v = std::max(v, x[static_cast<std::size_t>(ch)] > 0.5 ? 1.0 : 0.0);
                    break;
                }
                case CombinatorInfo::Op::Not:
                    v = x[static_cast<std::size_t>(c.child_vars[0])] > 0.5 ? 0.0 : 1.0;
                    break;
            }
            x[static_cast<std::size_t>(c.var)] = v;
        }
        if (!row_span_satisfied(rows, x, 1e-6)) return std::nullopt;
        return x;
    };
}

namespace {

// Waypoint primal heuristic: visit the must-visit boxes (in each order,
// nearest box point first) at full speed, then verify the canonical
// variable assignment against every model row. Any verified candidate
// seeds the branch-and-bound incumbent.
std::optional<std::vector<double>> waypoint_warm_start(const EncodeResult& enc,
                                                       const Scenario& scenario,
                                                       const RepairFn& repair) {
    const auto& targets = enc.visit_targets;
    if (targets.empty() || targets.size() > 3) return std::nullopt;
    auto model = dynamics::make_model(scenario.dynamics);
    if (model->name().rfind("single_integrator", 0) != 0) return std::nullopt;
    const auto u_box = model->control_bounds();
    const int n = enc.n_steps;
    const double dt = enc.dt;

    std::vector<std::size_t> order(targets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::optional<std::vector<double>> best;
    double best_obj = 1e300;
    do {
        std::vector<std::vector<double>> xs{scenario.x0};
        std::size_t next = 0;
        while (static_cast<int>(xs.size()) <= n) {
            std::vector<double> cur = xs.back();
            if (next < order.size()) {
                const auto& box = targets[order[next]];
                bool inside = true;
                for (int d = 0; d < enc.state_dim; ++d) {
                    double lo = box[static_cast<std::size_t>(d)][0];
                    double hi = box[static_cast<std::size_t>(d)][1];
                    double target = std::clamp(cur[static_cast<std::size_t>(d)], lo, hi);
                    double step = std::clamp(target - cur[static_cast<std::size_t>(d)],
                                             u_box[static_cast<std::size_t>(d)][0] * dt,
                                             u_box[static_cast<std::size_t>(d)][1] * dt);
                    cur[static_cast<std::size_t>(d)] += step;
                    inside = inside && cur[static_cast<std::size_t>(d)] >= lo &&
                             cur[static_cast<std::size_t>(d)] <= hi;
                }
                if (inside) ++next;
            }
            xs.push_back(cur);
        }
        if (next == order.size()) {
            // assemble the full solution vector and verify it
            std::vector<double> x(enc.model.vars.size(), 0.0);
            for (int k = 0; k <= n; ++k)
                for (int d = 0; d < enc.state_dim; ++d)
                    x[static_cast<std::size_t>(
                        enc.x_index[static_cast<std::size_t>(k * enc.state_dim + d)])] =
                        xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
            double obj_controls = 0.0;
            for (int k = 0; k < n; ++k)
                for (int d = 0; d < enc.control_dim; ++d) {
                    double u = (xs[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(d)] -
                                xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)]) /
                               dt;
                    x[static_cast<std::size_t>(
                        enc.u_index[static_cast<std::size_t>(k * enc.control_dim + d)])] = u;
                    obj_controls += std::abs(u);
                }
            // cost slacks sit right after their control variable
            for (std::size_t j = 0; j < enc.model.vars.size(); ++j)
                if (enc.model.vars[j].name[0] == 's' && enc.model.vars[j].name[1] == '_') {
                    // s_k_d pairs with u_k_d created just before it
                    x[j] = std::abs(x[j - 1]);
                }
            if (auto repaired = repair(x)) {
                double obj = 0.0;
                for (std::size_t j = 0; j < enc.model.objective.size(); ++j)
                    obj += enc.model.objective[j] * (*repaired)[j];
                if (obj < best_obj) {
                    best_obj = obj;
                    best = std::move(repaired);
                }
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace

PlanResult plan(const stl::SubformulaSet& subformulas, const Scenario& scenario,
                const CostSpec& cost, const SolveConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    auto model = dynamics::make_model(scenario.dynamics);
    const int n_steps = scenario.steps();
    EncodeResult enc = encode(subformulas, *model, scenario, scenario.x0, n_steps,
                              scenario.dt_s, cost);
    RepairFn repair = make_canonical_repair(enc);
    std::optional<std::vector<double>> warm = waypoint_warm_start(enc, scenario, repair);
    MilpResult milp = solve_milp(enc.model, cfg, repair, warm ? &*warm : nullptr);

    PlanResult out;
    out.trajectory.dt = scenario.dt_s;
    // Simplex vertices carry ~1e-12 residue; reporting coordinates at 1e-9
    // resolution lets boundary-touching samples sit exactly on the boundary.
    auto snap = [](double v) { return std::round(v * 1e9) / 1e9; };
    for (int k = 0; k <= n_steps; ++k) {
        std::vector<double> s;
        for (int d = 0; d < enc.state_dim; ++d)
            s.push_back(snap(milp.x[static_cast<std::size_t>(
                enc.x_index[static_cast<std::size_t>(k * enc.state_dim + d)])]));
        out.trajectory.samples.push_back(std::move(s));
    }
    for (int k = 0; k < n_steps; ++k) {
        std::vector<double> u;
        for (int d = 0; d < enc.control_dim; ++d)
            u.push_back(snap(milp.x[static_cast<std::size_t>(
                enc.u_index[static_cast<std::size_t>(k * enc.control_dim + d)])]));
        out.controls.push_back(std::move(u));
    }
    out.objective = milp.objective;
    out.nodes = milp.nodes;
    out.lp_iterations = milp.lp_iterations;

    out.robustness =
        stl::robustness(out.trajectory, 0, subformulas.conjunction(), scenario);
    if (out.robustness < -cfg.eps_check)
        throw EncodingMismatch("planned trajectory violates the encoded formula, robustness " +
                               std::to_string(out.robustness));
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

}  // namespace sff::planner
