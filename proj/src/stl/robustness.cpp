#include "sff/stl/robustness.hpp"

#include <algorithm>
#include <cmath>

namespace sff::stl {

double atom_robustness(const AtomicPredicate& atom, const Scenario& scenario,
                       std::span<const double> x, double t, const RobustnessOptions& opts) {
    if (atom.linear) {
        const LinearForm& lf = *atom.linear;
        if (lf.coeffs.size() > x.size())
            throw DimensionMismatch("linear predicate '" + atom.name + "' coefficient length " +
                                    std::to_string(lf.coeffs.size()) + " exceeds the state");
        double v = 0.0;
        for (std::size_t i = 0; i < lf.coeffs.size(); ++i) v += lf.coeffs[i] * x[i];
        return lf.sense == Sense::Geq ? v - lf.bound : lf.bound - v;
    }
    const Region& r = scenario.region(atom.name);
    if (!r.active(t)) return -opts.true_value;  // absent region: never inside
    return -r.field_value(x);
}

namespace {

struct Eval {
    const Trajectory& traj;
    const Scenario& scenario;
    const RobustnessOptions& opts;

    int window_lo(const Interval& i) const { return static_cast<int>(std::lround(i.a / traj.dt)); }
    int window_hi(const Interval& i) const { return static_cast<int>(std::lround(i.b / traj.dt)); }

    void check_horizon(int k, const Formula& f) const {
        if (k >= traj.length())
            throw HorizonExceeded("formula '" + format_stl(f) + "' needs sample " +
                                  std::to_string(k) + " but the trajectory has " +
                                  std::to_string(traj.length()));
    }

    double at(int k, const Formula& f) const {
        switch (f.kind()) {
            case NodeKind::True:
                return opts.true_value;
            case NodeKind::Atom:
                return atom_robustness(f.atom(), scenario, traj.samples[static_cast<std::size_t>(k)],
                                       k * traj.dt, opts);
            case NodeKind::Not:
                return -at(k, f.child(0));
            case NodeKind::And: {
                double m = at(k, f.child(0));
                for (std::size_t i = 1; i < f.arity(); ++i) m = std::min(m, at(k, f.child(i)));
                return m;
            }
            case NodeKind::Or: {
                double m = at(k, f.child(0));
                for (std::size_t i = 1; i < f.arity(); ++i) m = std::max(m, at(k, f.child(i)));
                return m;
            }
            case NodeKind::Until: {
                const int lo = k + window_lo(f.interval()), hi = k + window_hi(f.interval());
                check_horizon(hi, f);
                double best = -opts.true_value;
                for (int tp = lo; tp <= hi; ++tp) {
                    double v = at(tp, f.child(1));
                    for (int ts = k; ts <= tp; ++ts) v = std::min(v, at(ts, f.child(0)));
                    best = std::max(best, v);
                }
                return best;
            }
            case NodeKind::Eventually: {
                const int lo = k + window_lo(f.interval()), hi = k + window_hi(f.interval());
                check_horizon(hi, f);
                double best = at(lo, f.child(0));
                for (int tp = lo + 1; tp <= hi; ++tp) best = std::max(best, at(tp, f.child(0)));
                return best;
            }
            case NodeKind::Always: {
                const int lo = k + window_lo(f.interval()), hi = k + window_hi(f.interval());
                check_horizon(hi, f);
                double worst = at(lo, f.child(0));
                for (int tp = lo + 1; tp <= hi; ++tp) worst = std::min(worst, at(tp, f.child(0)));
                return worst;
            }
        }
        return 0.0;
    }
};

}  // namespace

double robustness(const Trajectory& traj, int t_index, const Formula& f, const Scenario& scenario,
                  const RobustnessOptions& opts) {
    if (traj.dt <= 0) throw Error("trajectory dt must be positive");
    if (traj.samples.empty()) throw Error("trajectory needs at least one sample");
    if (t_index < 0 || t_index >= traj.length())
        throw Error("t_index " + std::to_string(t_index) + " outside the trajectory");
    return Eval{traj, scenario, opts}.at(t_index, f);
}

reach::ValueField predicate_field(const AtomicPredicate& atom, const Scenario& scenario,
                                  const reach::Grid& grid) {
    reach::ValueField f;
    f.grid = grid;
    f.values.resize(grid.size());
    const int nd = grid.ndims();
    std::vector<double> x(static_cast<std::size_t>(nd));
    if (atom.linear) {
        const LinearForm& lf = *atom.linear;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, x);
            double v = 0.0;
            for (std::size_t d = 0; d < lf.coeffs.size(); ++d) v += lf.coeffs[d] * x[d];
            f.values[i] = lf.sense == Sense::Geq ? lf.bound - v : v - lf.bound;
        }
        return f;
    }
    const Region& r = scenario.region(atom.name);  // RegionUnresolved if absent
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x);
        f.values[i] = r.field_value(x);
    }
    return f;
}

}  // namespace sff::stl
