#pragma once

// Dynamics abstraction: continuous-time Hamiltonians with per-axis
// dissipation bounds for the reachability solver, and exact discrete-time
// (A, B) forms for the planner. Hamiltonians extremize box-bounded inputs
// analytically (bang-bang), never numerically.

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sff/errors.hpp"
#include "sff/scenario.hpp"

namespace sff::dynamics {

// Role of the control in the extremization; the disturbance always takes
// the opposite role (reach: inf_u sup_d, avoid: sup_u inf_d).
enum class ControlMode { Minimizes, Maximizes };

struct DiscreteLinear {
    int state_dim = 0;
    int control_dim = 0;
    double dt = 0.0;
    std::vector<double> A;  // row-major state_dim x state_dim
    std::vector<double> B;  // row-major state_dim x control_dim
};

// Per-axis decomposition of the Hamiltonian: every built-in model has
//   H(x, p) = sum_d [ drift_d(x) * p_d + gain_d * |p_d| ]
// after the box-bounded control and disturbance are extremized analytically
// (gain < 0 when the control minimizes, > 0 when it maximizes; an interval
// disturbance folds into drift via its center and into gain via its
// radius). The solver upwinds each axis with the exact Godunov flux of this
// form.
struct AxisTerm {
    double drift = 0.0;
    double gain = 0.0;
};

class DynamicsModel {
  public:
    virtual ~DynamicsModel() = default;

    virtual const std::string& name() const = 0;
    virtual int state_dim() const = 0;
    virtual int control_dim() const = 0;

    virtual std::vector<std::array<double, 2>> control_bounds() const = 0;
    virtual std::vector<std::array<double, 2>> disturbance_bounds() const = 0;

    virtual AxisTerm axis_term(int axis, std::span<const double> x, ControlMode mode) const = 0;

    // min/max over u plus the opposite extremum over d of p·f(x,u,d);
    // assembled from the per-axis terms.
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       ControlMode mode) const;

    // Upper bound on |dH/dp_axis| over the given state box; sets the
    // solver's CFL-stable time step.
    virtual double dissipation(int axis,
                               std::span<const std::array<double, 2>> state_box) const = 0;

    // Exact zero-order-hold discretization.
    virtual DiscreteLinear discrete(double dt) const = 0;

    // State-space box for the planner and grid construction: positions from
    // the workspace, velocity axes clamped by the model's speed limit.
    virtual std::vector<std::array<double, 2>> state_bounds(
        std::span<const std::array<double, 2>> workspace) const = 0;

    void check_dims(std::span<const double> x, std::span<const double> p) const {
        if (static_cast<int>(x.size()) != state_dim() || static_cast<int>(p.size()) != state_dim())
            throw DimensionMismatch("hamiltonian arguments for " + name());
    }
};

double hamiltonian_eval(const DynamicsModel& model, std::span<const double> x,
                        std::span<const double> p, ControlMode mode);

// A·x + B·u; throws ControlOutOfBounds when u leaves the control box.
std::vector<double> discrete_step(const DynamicsModel& model, std::span<const double> x,
                                  std::span<const double> u, double dt);

// Factory from a scenario's dynamics spec.
std::unique_ptr<DynamicsModel> make_model(const DynamicsSpec& spec);

std::unique_ptr<DynamicsModel> make_single_integrator_2d(
    double v_max, std::vector<std::array<double, 2>> disturbance = {});
std::unique_ptr<DynamicsModel> make_double_integrator_2d(
    double a_max, double v_max, std::vector<std::array<double, 2>> disturbance = {});
std::unique_ptr<DynamicsModel> make_double_integrator_1d(
    double a_max, double v_max, std::vector<std::array<double, 2>> disturbance = {});

}  // namespace sff::dynamics
