#pragma once

#include "cis/attack.hpp"
#include "cis/lti.hpp"

namespace cis {

enum class TrajectoryLabel { Nominal, Attacked, Spoofed };

const char* to_string(TrajectoryLabel l);

struct Trajectory {
    Eigen::VectorXd times;
    Eigen::MatrixXd states;   // row per step, n columns
    Eigen::MatrixXd outputs;  // row per step, l columns
    TrajectoryLabel label = TrajectoryLabel::Nominal;
    bool diverged = false;  // truncated when ||x||_inf crossed the blow-up cap
};

// Classical fixed-step RK4 on dx = Ax + B d(t), with d evaluated analytically
// from the plan (zero input when plan is null). Outputs y = Cx at every step
// including t = 0. A divergence past ||x||_inf > 1e12 truncates the
// trajectory and raises the flag instead of emitting NaNs.
Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const AttackPlan* plan, double t_end, double dt,
                    TrajectoryLabel label = TrajectoryLabel::Nominal);

struct GapResult {
    double gap = 0.0;
    bool diverged = false;
};

// sup_t ||y_attacked - y_spoofed||_inf over [0, t_end]: the attacked run from
// plan.x0 against the attack-free run from plan.x_spoof.
GapResult undetectability_gap(const LtiSystem& sys, const AttackPlan& plan,
                              double t_end = 10.0, double dt = 1e-3);

// Largest membership deficit along the trajectory; 0 means the run stayed
// inside the cone.
double cone_violation(const Trajectory& traj, const ConeSpec& cone);

}  // namespace cis
