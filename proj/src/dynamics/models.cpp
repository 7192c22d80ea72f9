#include "sff/dynamics/models.hpp"

#include <cmath>

namespace sff::dynamics {

double DynamicsModel::hamiltonian(std::span<const double> x, std::span<const double> p,
                                  ControlMode mode) const {
    check_dims(x, p);
    double h = 0.0;
    for (int d = 0; d < state_dim(); ++d) {
        AxisTerm t = axis_term(d, x, mode);
        h += t.drift * p[static_cast<std::size_t>(d)] +
             t.gain * std::abs(p[static_cast<std::size_t>(d)]);
    }
    return h;
}

namespace {

double dist_center(const std::vector<std::array<double, 2>>& d, std::size_t i) {
    if (i >= d.size()) return 0.0;
    return 0.5 * (d[i][0] + d[i][1]);
}

double dist_radius(const std::vector<std::array<double, 2>>& d, std::size_t i) {
    if (i >= d.size()) return 0.0;
    return 0.5 * (d[i][1] - d[i][0]);
}

class SingleIntegrator2D final : public DynamicsModel {
  public:
    SingleIntegrator2D(double v_max, std::vector<std::array<double, 2>> dist)
        : v_max_(v_max), dist_(std::move(dist)) {}

    const std::string& name() const override {
        static const std::string n = "single_integrator_2d";
        return n;
    }
    int state_dim() const override { return 2; }
    int control_dim() const override { return 2; }

    std::vector<std::array<double, 2>> control_bounds() const override {
        return {{-v_max_, v_max_}, {-v_max_, v_max_}};
    }
    std::vector<std::array<double, 2>> disturbance_bounds() const override { return dist_; }

    AxisTerm axis_term(int axis, std::span<const double>, ControlMode mode) const override {
        const std::size_t i = static_cast<std::size_t>(axis);
        const double rad = dist_radius(dist_, i);
        AxisTerm t;
        t.drift = dist_center(dist_, i);
        t.gain = mode == ControlMode::Minimizes ? -v_max_ + rad : v_max_ - rad;
        return t;
    }

    double dissipation(int axis, std::span<const std::array<double, 2>>) const override {
        return v_max_ + dist_radius(dist_, static_cast<std::size_t>(axis)) +
               std::abs(dist_center(dist_, static_cast<std::size_t>(axis)));
    }

    DiscreteLinear discrete(double dt) const override {
        DiscreteLinear d;
        d.state_dim = 2;
        d.control_dim = 2;
        d.dt = dt;
        d.A = {1, 0, 0, 1};
        d.B = {dt, 0, 0, dt};
        return d;
    }

    std::vector<std::array<double, 2>> state_bounds(
        std::span<const std::array<double, 2>> workspace) const override {
        return {workspace.begin(), workspace.end()};
    }

  private:
    double v_max_;
    std::vector<std::array<double, 2>> dist_;
};

// Per-axis double integrator; positions first, then the matching
// velocities. The speed limit is a state-space clamp (grid domain / planner
// bound), keeping the Hamiltonian closed-form.
class DoubleIntegrator final : public DynamicsModel {
  public:
    DoubleIntegrator(int axes, double a_max, double v_max,
                     std::vector<std::array<double, 2>> dist)
        : axes_(axes),
          a_max_(a_max),
          v_max_(v_max),
          dist_(std::move(dist)),
          name_(axes == 1 ? "double_integrator_1d" : "double_integrator_2d") {}

    const std::string& name() const override { return name_; }
    int state_dim() const override { return 2 * axes_; }
    int control_dim() const override { return axes_; }

    std::vector<std::array<double, 2>> control_bounds() const override {
        return std::vector<std::array<double, 2>>(static_cast<std::size_t>(axes_),
                                                  {-a_max_, a_max_});
    }
    std::vector<std::array<double, 2>> disturbance_bounds() const override { return dist_; }

    AxisTerm axis_term(int axis, std::span<const double> x, ControlMode mode) const override {
        AxisTerm t;
        if (axis < axes_) {
            t.drift = x[static_cast<std::size_t>(axes_ + axis)];
            return t;
        }
        const std::size_t i = static_cast<std::size_t>(axis - axes_);
        const double rad = dist_radius(dist_, i);
        t.drift = dist_center(dist_, i);
        t.gain = mode == ControlMode::Minimizes ? -a_max_ + rad : a_max_ - rad;
        return t;
    }

    double dissipation(int axis, std::span<const std::array<double, 2>> state_box) const override {
        if (axis < axes_) {
            // dH/dp_pos = velocity; bounded by the grid's velocity extent.
            double vmax = v_max_;
            std::size_t vaxis = static_cast<std::size_t>(axes_ + axis);
            if (vaxis < state_box.size())
                vmax = std::max(std::abs(state_box[vaxis][0]), std::abs(state_box[vaxis][1]));
            return vmax;
        }
        const std::size_t i = static_cast<std::size_t>(axis - axes_);
        return a_max_ + dist_radius(dist_, i) + std::abs(dist_center(dist_, i));
    }

    DiscreteLinear discrete(double dt) const override {
        const int n = 2 * axes_;
        DiscreteLinear d;
        d.state_dim = n;
        d.control_dim = axes_;
        d.dt = dt;
        d.A.assign(static_cast<std::size_t>(n * n), 0.0);
        d.B.assign(static_cast<std::size_t>(n * axes_), 0.0);
        for (int i = 0; i < n; ++i) d.A[static_cast<std::size_t>(i * n + i)] = 1.0;
        for (int i = 0; i < axes_; ++i) {
            d.A[static_cast<std::size_t>(i * n + axes_ + i)] = dt;
            d.B[static_cast<std::size_t>(i * axes_ + i)] = 0.5 * dt * dt;
            d.B[static_cast<std::size_t>((axes_ + i) * axes_ + i)] = dt;
        }
        return d;
    }

    std::vector<std::array<double, 2>> state_bounds(
        std::span<const std::array<double, 2>> workspace) const override {
        std::vector<std::array<double, 2>> b(workspace.begin(), workspace.end());
        for (int i = 0; i < axes_; ++i) b.push_back({-v_max_, v_max_});
        return b;
    }

  private:
    int axes_;
    double a_max_;
    double v_max_;
    std::vector<std::array<double, 2>> dist_;
    std::string name_;
};

}  // namespace

double hamiltonian_eval(const DynamicsModel& model, std::span<const double> x,
                        std::span<const double> p, ControlMode mode) {
    return model.hamiltonian(x, p, mode);
}

std::vector<double> discrete_step(const DynamicsModel& model, std::span<const double> x,
                                  std::span<const double> u, double dt) {
    DiscreteLinear d = model.discrete(dt);
    if (static_cast<int>(x.size()) != d.state_dim || static_cast<int>(u.size()) != d.control_dim)
        throw DimensionMismatch("discrete_step arguments for " + model.name());
    auto bounds = model.control_bounds();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < bounds[i][0] - 1e-12 || u[i] > bounds[i][1] + 1e-12)
            throw ControlOutOfBounds("u[" + std::to_string(i) + "] = " + std::to_string(u[i]));
    }
    std::vector<double> next(static_cast<std::size_t>(d.state_dim), 0.0);
    for (int i = 0; i < d.state_dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d.state_dim; ++j)
            acc += d.A[static_cast<std::size_t>(i * d.state_dim + j)] * x[static_cast<std::size_t>(j)];
        for (int j = 0; j < d.control_dim; ++j)
            acc += d.B[static_cast<std::size_t>(i * d.control_dim + j)] * u[static_cast<std::size_t>(j)];
        next[static_cast<std::size_t>(i)] = acc;
    }
    return next;
}

std::unique_ptr<DynamicsModel> make_single_integrator_2d(
    double v_max, std::vector<std::array<double, 2>> disturbance) {
    return std::make_unique<SingleIntegrator2D>(v_max, std::move(disturbance));
}

std::unique_ptr<DynamicsModel> make_double_integrator_2d(
    double a_max, double v_max, std::vector<std::array<double, 2>> disturbance) {
    return std::make_unique<DoubleIntegrator>(2, a_max, v_max, std::move(disturbance));
}

std::unique_ptr<DynamicsModel> make_double_integrator_1d(
    double a_max, double v_max, std::vector<std::array<double, 2>> disturbance) {
    return std::make_unique<DoubleIntegrator>(1, a_max, v_max, std::move(disturbance));
}

std::unique_ptr<DynamicsModel> make_model(const DynamicsSpec& spec) {
    if (spec.model == "single_integrator_2d")
        return make_single_integrator_2d(spec.v_max, spec.disturbance);
    if (spec.model == "double_integrator_2d")
        return make_double_integrator_2d(spec.a_max, spec.v_max, spec.disturbance);
    if (spec.model == "double_integrator_1d")
        return make_double_integrator_1d(spec.a_max, spec.v_max, spec.disturbance);
    throw ValidationError("unknown dynamics model '" + spec.model + "'");
}

}  // namespace sff::dynamics
