#pragma once

// Quantitative robustness over sampled trajectories:
//   predicate        pi(x) - c
//   negation         -rho
//   conjunction      min over children (disjunction: max)
//   until [a,b]      max_{t' in window} min(rho(phi2, t'), min_{t'' in [t, t']} rho(phi1, t''))
// Eventually/always derive from until and negation; satisfaction <=> rho > 0.
//
// Intervals map to the inclusive sample-index set {round(a/dt), ..,
// round(b/dt)}; windows reaching past the last sample raise HorizonExceeded
// rather than truncating.

#include <span>
#include <vector>

#include "sff/reach/grid.hpp"
#include "sff/scenario.hpp"
#include "sff/stl/ast.hpp"

namespace sff::stl {

struct Trajectory {
    double dt = 1.0;                           // > 0, sample k is at time k*dt
    std::vector<std::vector<double>> samples;  // all the same dimension, >= 1

    int length() const { return static_cast<int>(samples.size()); }
};

struct RobustnessOptions {
    // Finite stand-in for the robustness of True so min/max stays finite.
    double true_value = 1e9;
};

// Robustness value of the atom at state x, time t (seconds). Positive inside
// the satisfaction set. Regions with an activity window count as absent
// (value -true_value) outside it.
double atom_robustness(const AtomicPredicate& atom, const Scenario& scenario,
                       std::span<const double> x, double t,
                       const RobustnessOptions& opts = {});

double robustness(const Trajectory& traj, int t_index, const Formula& f,
                  const Scenario& scenario, const RobustnessOptions& opts = {});

// Samples the atom's satisfaction field over the grid, negative inside
// (h < 0 on the satisfaction set, the sign convention of reachability).
reach::ValueField predicate_field(const AtomicPredicate& atom, const Scenario& scenario,
                                  const reach::Grid& grid);

}  // namespace sff::stl
