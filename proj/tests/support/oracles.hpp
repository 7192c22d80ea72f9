#pragma once

// Independent oracles for the test suites. These deliberately avoid the
// library's evaluation paths: robustness is computed bottom-up over
// per-node time arrays (dynamic programming) instead of the library's
// top-down recursion, and boolean satisfaction is its own evaluator.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "sff/stl/ast.hpp"

namespace oracle {

using sff::stl::Formula;
using sff::stl::Interval;
using sff::stl::NodeKind;

using Signal = std::vector<std::vector<double>>;  // samples of the state
using AtomFn = std::function<double(const sff::stl::AtomicPredicate&, const std::vector<double>&,
                                    double t)>;

inline AtomFn linear_atom_fn() {
    return [](const sff::stl::AtomicPredicate& a, const std::vector<double>& x, double) {
        const auto& lf = *a.linear;
        double v = 0.0;
        for (std::size_t i = 0; i < lf.coeffs.size(); ++i) v += lf.coeffs[i] * x[i];
        return lf.sense == sff::stl::Sense::Geq ? v - lf.bound : lf.bound - v;
    };
}

inline int idx_of(double seconds, double dt) {
    return static_cast<int>(std::lround(seconds / dt));
}

// Bottom-up quantitative semantics: fills rho[k] for every k where the
// formula's windows fit, NaN elsewhere.
inline std::vector<double> rho_array(const Signal& sig, double dt, const Formula& f,
                                     const AtomFn& atom, double true_value = 1e9) {
    const int n = static_cast<int>(sig.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> out(static_cast<std::size_t>(n), nan);
    switch (f.kind()) {
        case NodeKind::True:
            std::fill(out.begin(), out.end(), true_value);
            return out;
        case NodeKind::Atom:
            for (int k = 0; k < n; ++k)
                out[static_cast<std::size_t>(k)] =
                    atom(f.atom(), sig[static_cast<std::size_t>(k)], k * dt);
            return out;
        case NodeKind::Not: {
            auto c = rho_array(sig, dt, f.child(0), atom, true_value);
            for (int k = 0; k < n; ++k)
                out[static_cast<std::size_t>(k)] = -c[static_cast<std::size_t>(k)];
            return out;
        }
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<std::vector<double>> cs;
            for (const auto& c : f.children()) cs.push_back(rho_array(sig, dt, c, atom, true_value));
            for (int k = 0; k < n; ++k) {
                double acc = cs[0][static_cast<std::size_t>(k)];
                for (std::size_t i = 1; i < cs.size(); ++i) {
                    double v = cs[i][static_cast<std::size_t>(k)];
                    acc = f.kind() == NodeKind::And ? std::min(acc, v) : std::max(acc, v);
                }
                out[static_cast<std::size_t>(k)] = acc;
            }
            return out;
        }
        case NodeKind::Eventually:
        case NodeKind::Always: {
            auto c = rho_array(sig, dt, f.child(0), atom, true_value);
            const int a = idx_of(f.interval().a, dt), b = idx_of(f.interval().b, dt);
            for (int k = 0; k + b < n; ++k) {
                double acc = c[static_cast<std::size_t>(k + a)];
                for (int t = k + a + 1; t <= k + b; ++t) {
                    double v = c[static_cast<std::size_t>(t)];
                    acc = f.kind() == NodeKind::Eventually ? std::max(acc, v) : std::min(acc, v);
                }
                if (std::isnan(acc)) continue;
                out[static_cast<std::size_t>(k)] = acc;
            }
            return out;
        }
        case NodeKind::Until: {
            auto l = rho_array(sig, dt, f.child(0), atom, true_value);
            auto r = rho_array(sig, dt, f.child(1), atom, true_value);
            const int a = idx_of(f.interval().a, dt), b = idx_of(f.interval().b, dt);
            for (int k = 0; k + b < n; ++k) {
                double best = -true_value;
                bool bad = false;
                for (int tp = k + a; tp <= k + b; ++tp) {
                    double v = r[static_cast<std::size_t>(tp)];
                    for (int ts = k; ts <= tp; ++ts)
                        v = std::min(v, l[static_cast<std::size_t>(ts)]);
                    if (std::isnan(v)) bad = true;
                    best = std::max(best, v);
                }
                if (!bad) out[static_cast<std::size_t>(k)] = best;
            }
            return out;
        }
    }
    return out;
}

inline double rho(const Signal& sig, double dt, int k, const Formula& f, const AtomFn& atom,
                  double true_value = 1e9) {
    return rho_array(sig, dt, f, atom, true_value)[static_cast<std::size_t>(k)];
}

// Boolean semantics, 1 = satisfied, 0 = violated, -1 = window does not fit.
inline int sat(const Signal& sig, double dt, int k, const Formula& f, const AtomFn& atom) {
    const int n = static_cast<int>(sig.size());
    switch (f.kind()) {
        case NodeKind::True: return 1;
        case NodeKind::Atom:
            return atom(f.atom(), sig[static_cast<std::size_t>(k)], k * dt) > 0 ? 1 : 0;
        case NodeKind::Not: {
            int s = sat(sig, dt, k, f.child(0), atom);
            return s < 0 ? s : 1 - s;
        }
        case NodeKind::And: {
            int acc = 1;
            for (const auto& c : f.children()) {
                int s = sat(sig, dt, k, c, atom);
                if (s < 0) return s;
                acc = std::min(acc, s);
            }
            return acc;
        }
        case NodeKind::Or: {
            int acc = 0;
            for (const auto& c : f.children()) {
                int s = sat(sig, dt, k, c, atom);
                if (s < 0) return s;
                acc = std::max(acc, s);
            }
            return acc;
        }
        case NodeKind::Eventually:
        case NodeKind::Always: {
            const int a = idx_of(f.interval().a, dt), b = idx_of(f.interval().b, dt);
            if (k + b >= n) return -1;
            bool all = true, any = false;
            for (int t = k + a; t <= k + b; ++t) {
                int s = sat(sig, dt, t, f.child(0), atom);
                if (s < 0) return s;
                all = all && s == 1;
                any = any || s == 1;
            }
            return f.kind() == NodeKind::Always ? (all ? 1 : 0) : (any ? 1 : 0);
        }
        case NodeKind::Until: {
            const int a = idx_of(f.interval().a, dt), b = idx_of(f.interval().b, dt);
            if (k + b >= n) return -1;
            for (int tp = k + a; tp <= k + b; ++tp) {
                int sr = sat(sig, dt, tp, f.child(1), atom);
                if (sr < 0) return sr;
                if (sr != 1) continue;
                bool held = true;
                for (int ts = k; ts <= tp; ++ts) {
                    int sl = sat(sig, dt, ts, f.child(0), atom);
                    if (sl < 0) return sl;
                    held = held && sl == 1;
                }
                if (held) return 1;
            }
            return 0;
        }
    }
    return 0;
}

// Closed-form point-to-box distance, positive outside, negative inside.
inline double box_signed_distance(const std::vector<double>& x,
                                  const std::vector<std::array<double, 2>>& box) {
    double out_sq = 0.0, inside = -1e300;
    for (std::size_t i = 0; i < box.size(); ++i) {
        double q = std::max(box[i][0] - x[i], x[i] - box[i][1]);
        if (q > 0) out_sq += q * q;
        inside = std::max(inside, q);
    }
    return out_sq > 0 ? std::sqrt(out_sq) : inside;
}

// ── random generators ───────────────────────────────────────────────────────

struct FormulaGen {
    std::mt19937 rng;
    int max_depth = 4;
    double max_bound = 3.0;

    explicit FormulaGen(unsigned seed) : rng(seed) {}

    sff::stl::LinearForm linear() {
        std::uniform_real_distribution<double> c(-max_bound, max_bound);
        sff::stl::LinearForm lf;
        lf.coeffs = {1.0};
        lf.bound = c(rng);
        lf.sense = sff::stl::Sense::Geq;
        return lf;
    }

    Interval interval() {
        std::uniform_int_distribution<int> d(0, 3);
        int a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        return {static_cast<double>(a), static_cast<double>(b)};
    }

    Formula gen(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
        switch (pick(rng)) {
            case 0:
            case 1: return Formula::atom("p", linear());
            case 2: return Formula::negate(gen(depth - 1));
            case 3:
            case 4: {
                std::uniform_int_distribution<int> nc(2, 3);
                std::vector<Formula> cs;
                int n = nc(rng);
                for (int i = 0; i < n; ++i) cs.push_back(gen(depth - 1));
                return Formula::conj(std::move(cs));
            }
            case 5: {
                std::vector<Formula> cs{gen(depth - 1), gen(depth - 1)};
                return Formula::disj(std::move(cs));
            }
            case 6: return Formula::until(gen(depth - 1), interval(), gen(depth - 1));
            case 7: return Formula::eventually(interval(), gen(depth - 1));
            case 8:
            case 9: return Formula::always(interval(), gen(depth - 1));
        }
        return Formula::truth();
    }

    Signal signal(int len) {
        std::uniform_real_distribution<double> v(-3.0, 3.0);
        std::uniform_int_distribution<int> hold(1, 4);
        Signal s;
        while (static_cast<int>(s.size()) < len) {
            double val = v(rng);
            int reps = hold(rng);
            for (int i = 0; i < reps && static_cast<int>(s.size()) < len; ++i) s.push_back({val});
        }
        return s;
    }
};

// Total window depth: a trajectory of this many extra samples always fits.
inline int horizon_samples(const Formula& f, double dt) {
    int local = 0;
    switch (f.kind()) {
        case NodeKind::Until:
        case NodeKind::Eventually:
        case NodeKind::Always: local = idx_of(f.interval().b, dt); break;
        default: break;
    }
    int deepest = 0;
    for (const auto& c : f.children()) deepest = std::max(deepest, horizon_samples(c, dt));
    return local + deepest;
}

}  // namespace oracle
