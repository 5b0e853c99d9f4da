#include "cis/simulate.hpp"

#include <cmath>

namespace cis {

const char* to_string(TrajectoryLabel l) {
    switch (l) {
        case TrajectoryLabel::Nominal: return "nominal";
        case TrajectoryLabel::Attacked: return "attacked";
        case TrajectoryLabel::Spoofed: return "spoofed";
    }
    return "?";
}

namespace {
constexpr double kBlowUp = 1e12;
}

Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const AttackPlan* plan, double t_end, double dt,
                    TrajectoryLabel label) {
    sys.validate();
    if (!(dt > 0.0) || t_end < dt)
        throw std::invalid_argument("simulate: need dt > 0 and t_end >= dt");
    if (x0.size() != sys.state_dim())
        throw DimensionError("simulate: x0 has the wrong length");
    if (plan) {
        if (plan->d0.size() != sys.input_dim())
            throw DimensionError("simulate: plan input dimension mismatch");
    }

    const int n = sys.state_dim();
    const int steps = static_cast<int>(std::llround(t_end / dt));

    auto deriv = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
        if (!plan) return sys.A * x;
        return sys.A * x + sys.B * plan->signal(t);
    };

    Trajectory traj;
    traj.label = label;
    traj.times.resize(steps + 1);
    traj.states.resize(steps + 1, n);
    traj.outputs.resize(steps + 1, sys.output_dim());

    Eigen::VectorXd x = x0;
    int written = 0;
    for (int k = 0; k <= steps; ++k) {
        double t = k * dt;
        traj.times(k) = t;
        traj.states.row(k) = x.transpose();
        traj.outputs.row(k) = (sys.C * x).transpose();
        written = k + 1;
        if (x.lpNorm<Eigen::Infinity>() > kBlowUp) {
            traj.diverged = true;
            break;
        }
        if (k == steps) break;
        Eigen::VectorXd k1 = deriv(t, x);
        Eigen::VectorXd k2 = deriv(t + 0.5 * dt, x + 0.5 * dt * k1);
        Eigen::VectorXd k3 = deriv(t + 0.5 * dt, x + 0.5 * dt * k2);
        Eigen::VectorXd k4 = deriv(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    traj.times.conservativeResize(written);
    traj.states.conservativeResize(written, Eigen::NoChange);
    traj.outputs.conservativeResize(written, Eigen::NoChange);
    return traj;
}

GapResult undetectability_gap(const LtiSystem& sys, const AttackPlan& plan,
                              double t_end, double dt) {
    validate_plan(plan, sys);
    Trajectory attacked =
        simulate(sys, plan.x0, &plan, t_end, dt, TrajectoryLabel::Attacked);
    Trajectory spoofed =
        simulate(sys, plan.x_spoof, nullptr, t_end, dt, TrajectoryLabel::Spoofed);

    GapResult res;
    res.diverged = attacked.diverged || spoofed.diverged;
    const Eigen::Index rows = std::min(attacked.outputs.rows(), spoofed.outputs.rows());
    if (rows > 0)
        res.gap = (attacked.outputs.topRows(rows) - spoofed.outputs.topRows(rows))
                      .cwiseAbs()
                      .maxCoeff();
    return res;
}

double cone_violation(const Trajectory& traj, const ConeSpec& cone) {
    if (traj.states.cols() != cone.ambient_dim())
        throw DimensionError("cone_violation: cone does not match the state dimension");
    double worst = 0.0;
    for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
        double margin = membership_margin(cone, traj.states.row(k).transpose());
        worst = std::max(worst, -margin);
    }
    return worst;
}

}  // namespace cis
