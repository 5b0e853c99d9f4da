#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "cis/simulate.hpp"
#include "cis/zeros.hpp"
#include "helpers.hpp"

using namespace cis;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LtiSystem plain(const MatrixXd& A) {
    LtiSystem sys;
    sys.A = A;
    sys.B = MatrixXd::Zero(A.rows(), 1);
    sys.C = MatrixXd::Identity(A.rows(), A.cols());
    return sys;
}

}  // namespace

TEST_CASE("autonomous decay matches the scalar exponential") {
    LtiSystem sys = plain(-MatrixXd::Identity(2, 2));
    Trajectory traj = simulate(sys, VectorXd::Ones(2), nullptr, 1.0, 1e-3);
    REQUIRE(traj.times.size() == 1001);
    VectorXd xf = traj.states.row(1000).transpose();
    CHECK((xf.array() - std::exp(-1.0)).abs().maxCoeff() <= 1e-8);
    CHECK_FALSE(traj.diverged);
}

TEST_CASE("step-size and argument validation") {
    LtiSystem sys = plain(-MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS((void)simulate(sys, VectorXd::Ones(2), nullptr, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate(sys, VectorXd::Ones(3), nullptr, 1.0, 0.1),
                    DimensionError);
}

TEST_CASE("fourth-order convergence against the matrix exponential") {
    std::mt19937_64 rng(401);
    MatrixXd A = test_helpers::random_metzler_stable(4, rng);
    LtiSystem sys = plain(A);
    VectorXd x0(4);
    x0 << 1.0, 0.5, 0.25, 2.0;
    VectorXd exact = (A * 1.0).exp() * x0;  // reference solution

    auto terminal_error = [&](double dt) {
        Trajectory t = simulate(sys, x0, nullptr, 1.0, dt);
        return (t.states.row(t.states.rows() - 1).transpose() - exact).norm();
    };
    double e1 = terminal_error(2e-2);
    double e2 = terminal_error(1e-2);
    double ratio = e1 / e2;
    CHECK(ratio > 8.0);   // halving dt cuts the error about 16x
    CHECK(ratio < 32.0);
}

TEST_CASE("superposition of attacked and spoofed runs") {
    std::mt19937_64 rng(403);
    MatrixXd A = test_helpers::random_metzler_stable(3, rng);
    LtiSystem sys;
    sys.A = A;
    sys.B = VectorXd::Unit(3, 0);
    sys.C = VectorXd::Unit(3, 1).transpose();

    AttackPlan plan;
    plan.s0 = {-0.7, 0.0};
    plan.d0 = Eigen::VectorXcd::Constant(1, std::complex<double>(-0.8, 0.0));
    plan.zeta = Eigen::VectorXcd::Zero(3);
    plan.x0 = VectorXd::Zero(3);
    plan.x_spoof = VectorXd::Zero(3);

    VectorXd x0(3), xs(3);
    x0 << 1.0, 2.0, 0.5;
    xs << 0.3, 0.1, 0.9;
    Trajectory a = simulate(sys, x0, &plan, 5.0, 1e-3);
    Trajectory b = simulate(sys, xs, nullptr, 5.0, 1e-3);
    Trajectory c = simulate(sys, VectorXd(x0 - xs), &plan, 5.0, 1e-3);
    CHECK(((a.states - b.states) - c.states).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("nonnegative inputs keep positive systems in the orthant") {
    std::mt19937_64 rng(407);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + int(rng() % 4);
        LtiSystem sys;
        sys.A = test_helpers::random_metzler_stable(n, rng);
        sys.B = VectorXd::Unit(n, int(rng() % n));
        sys.C = MatrixXd::Identity(n, n);
        sys.cone = ConeSpec::orthant(n);

        AttackPlan plan;  // d(t) = e^{-0.4 t} >= 0
        plan.s0 = {-0.4, 0.0};
        plan.d0 = Eigen::VectorXcd::Constant(1, std::complex<double>(-1.0, 0.0));
        plan.zeta = Eigen::VectorXcd::Zero(n);
        plan.x0 = VectorXd::Zero(n);
        plan.x_spoof = VectorXd::Zero(n);

        VectorXd x0 = VectorXd::Random(n).cwiseAbs();
        Trajectory traj = simulate(sys, x0, &plan, 5.0, 1e-3);
        CHECK(cone_violation(traj, *sys.cone) == 0.0);
    }
}

TEST_CASE("cone violation measures the worst membership deficit") {
    LtiSystem sys = plain(-MatrixXd::Identity(2, 2));
    sys.cone = ConeSpec::orthant(2);

    Trajectory inside = simulate(sys, VectorXd::Ones(2), nullptr, 2.0, 1e-2);
    CHECK(cone_violation(inside, *sys.cone) == 0.0);

    VectorXd x0(2);
    x0 << -0.5, 1.0;
    Trajectory outside = simulate(sys, x0, nullptr, 2.0, 1e-2);
    CHECK(cone_violation(outside, *sys.cone) == doctest::Approx(0.5));
}

TEST_CASE("oscillating attacks push positive systems out of the cone") {
    LtiSystem sys;
    sys.A = Eigen::Vector3d(-1, -2, -3).asDiagonal();
    sys.B = Eigen::Vector3d(1, 1, 1);
    sys.C = Eigen::RowVector3d(1, -1, 1);
    sys.cone = ConeSpec::orthant(3);

    AttackPlan plan = synth_complex_attack(sys, {-2.0, 1.0},
                                           VectorXd::Constant(3, 0.05), 1.0, 0.7, 3.0);
    GapResult gap = undetectability_gap(sys, plan);
    CHECK(gap.gap <= 1e-6);  // still invisible at the output
    Trajectory attacked = simulate(sys, plan.x0, &plan, 10.0, 1e-3,
                                   TrajectoryLabel::Attacked);
    CHECK(cone_violation(attacked, *sys.cone) > 0.0);
}

TEST_CASE("a zero attack with an unchanged start leaves no gap at all") {
    LtiSystem sys;
    sys.A = Eigen::Vector2d(-1, -2).asDiagonal();
    sys.B = Eigen::Vector2d(1, 1);
    sys.C = Eigen::RowVector2d(1, 1);

    AttackPlan plan;
    plan.s0 = {-1.5, 0.0};
    plan.d0 = Eigen::VectorXcd::Zero(1);
    plan.zeta = Eigen::VectorXcd::Zero(2);
    plan.x0 = VectorXd::Ones(2);
    plan.x_spoof = plan.x0;

    Trajectory a = simulate(sys, plan.x0, &plan, 1.0, 1e-2, TrajectoryLabel::Attacked);
    Trajectory b = simulate(sys, plan.x_spoof, nullptr, 1.0, 1e-2,
                            TrajectoryLabel::Spoofed);
    CHECK((a.outputs - b.outputs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturbed attack directions become detectable") {
    LtiSystem sys;
    sys.A.resize(4, 4);
    sys.A << -4.03, 1.48, 0, 0, 1.48, -3.57, 1.57, 0, 0, 1.57, -3.24, 0.64, 0, 0,
        0.64, -1.25;
    sys.B = VectorXd::Unit(4, 0);
    sys.C = VectorXd::Unit(4, 2).transpose();
    VectorXd x0(4);
    x0 << 12.5822, 10.0375, 13.4447, 14.7301;

    AttackPlan plan = synth_real_attack(sys, -1.25, x0, 15.0);
    GapResult clean = undetectability_gap(sys, plan);
    CHECK(clean.gap <= 1e-6);

    AttackPlan wrong = plan;
    wrong.d0 *= 1.01;
    Trajectory a = simulate(sys, wrong.x0, &wrong, 10.0, 1e-3, TrajectoryLabel::Attacked);
    Trajectory b = simulate(sys, wrong.x_spoof, nullptr, 10.0, 1e-3,
                            TrajectoryLabel::Spoofed);
    double gap = (a.outputs - b.outputs).cwiseAbs().maxCoeff();
    CHECK(gap > 10.0 * 1e-6);
}

TEST_CASE("divergence is truncated and flagged") {
    MatrixXd A(1, 1);
    A << 1.0;
    LtiSystem sys = plain(A);
    VectorXd x0(1);
    x0 << 1e3;
    Trajectory traj = simulate(sys, x0, nullptr, 40.0, 1e-2);
    CHECK(traj.diverged);
    CHECK(traj.times.size() < 40.0 / 1e-2 + 1);
    CHECK(traj.states.cwiseAbs().maxCoeff() < 1e13);
}

TEST_CASE("4-bus attack leaves the decay rate untouched") {
    LtiSystem sys;
    sys.A.resize(4, 4);
    sys.A << -4.03, 1.48, 0, 0, 1.48, -3.57, 1.57, 0, 0, 1.57, -3.24, 0.64, 0, 0,
        0.64, -1.25;
    sys.B = VectorXd::Unit(4, 0);
    sys.C = VectorXd::Unit(4, 2).transpose();
    VectorXd x0(4);
    x0 << 12.5822, 10.0375, 13.4447, 14.7301;
    AttackPlan plan = synth_real_attack(sys, -1.25, x0, 15.0);
    Trajectory traj = simulate(sys, x0, &plan, 60.0, 1e-2, TrajectoryLabel::Attacked);
    CHECK_FALSE(traj.diverged);
    CHECK(traj.states.row(traj.states.rows() - 1).norm() <= 1e-3);
}
