#include "cis/attack.hpp"

#include <cmath>

namespace cis {

Eigen::VectorXd AttackPlan::signal(double t) const {
    const std::complex<double> phase = std::exp(s0 * t);
    Eigen::VectorXcd e = phase * d0;
    return -l1 * e.real() - l2 * e.imag();
}

namespace {

AttackPlan build_plan(const LtiSystem& sys, std::complex<double> s0,
                      const Eigen::VectorXd& x0, double l1, double l2, double scale) {
    if (x0.size() != sys.state_dim())
        throw DimensionError("attack synthesis: x0 has the wrong length");
    if (scale == 0.0) throw std::invalid_argument("attack synthesis: zero scale");

    NullVector nv = rosenbrock_nullvector(sys, s0);
    AttackPlan plan;
    plan.s0 = s0;
    plan.zeta = scale * nv.zeta;
    plan.d0 = scale * nv.d0;
    plan.l1 = l1;
    plan.l2 = l2;
    plan.x0 = x0;
    plan.x_spoof = x0 - (l1 * plan.zeta.real() + l2 * plan.zeta.imag());
    plan.residual = std::abs(scale) * nv.residual;
    plan.multiplicity = nv.multiplicity;
    return plan;
}

}  // namespace

AttackPlan synth_real_attack(const LtiSystem& sys, double s0,
                             const Eigen::VectorXd& x0, double scale) {
    AttackPlan plan = build_plan(sys, {s0, 0.0}, x0, 1.0, 0.0, scale);
    if (plan.zeta.imag().lpNorm<Eigen::Infinity>() > 1e-10 * plan.zeta.norm() ||
        plan.d0.imag().lpNorm<Eigen::Infinity>() > 1e-10 * (1.0 + plan.d0.norm()))
        throw SolverFailure(
            "real zero produced a complex-only null vector; refusing to project");
    return plan;
}

AttackPlan synth_complex_attack(const LtiSystem& sys, std::complex<double> s0,
                                const Eigen::VectorXd& x0, double l1, double l2,
                                double scale) {
    if (l1 == 0.0 && l2 == 0.0)
        throw std::invalid_argument("attack synthesis: (l1, l2) must not be (0, 0)");
    return build_plan(sys, s0, x0, l1, l2, scale);
}

FeasibilityResult cone_feasibility(const AttackPlan& plan, const LtiSystem& sys) {
    if (!sys.cone)
        throw std::invalid_argument("cone_feasibility: system carries no cone");
    FeasibilityResult result;
    result.plan = plan;

    if (std::abs(plan.s0.imag()) > 1e-12 * (1.0 + std::abs(plan.s0.real()))) {
        // oscillating signal: sign changes every half period
        result.feasible = false;
        result.plan.cone_feasible = false;
        return result;
    }

    const Eigen::VectorXd d = plan.d0.real();
    const double tol = 1e-12 * std::max(1.0, d.lpNorm<Eigen::Infinity>());
    const bool all_nonpos = (d.array() <= tol).all();
    const bool all_nonneg = (d.array() >= -tol).all();

    if (all_nonpos) {
        result.feasible = true;
    } else if (all_nonneg) {
        // flip the whole null vector; it stays a null vector
        result.plan.zeta = -plan.zeta;
        result.plan.d0 = -plan.d0;
        result.plan.x_spoof =
            plan.x0 - (plan.l1 * result.plan.zeta.real() + plan.l2 * result.plan.zeta.imag());
        result.feasible = true;
    } else {
        result.feasible = false;  // mixed signs: no sign flip fixes every channel
    }
    result.plan.cone_feasible = result.feasible;
    return result;
}

void validate_plan(const AttackPlan& plan, const LtiSystem& sys, double rel_tol) {
    sys.validate();
    const int n = sys.state_dim(), m = sys.input_dim();
    if (plan.zeta.size() != n || plan.d0.size() != m || plan.x0.size() != n ||
        plan.x_spoof.size() != n)
        throw DimensionError("attack plan dimensions do not match the system");

    Eigen::VectorXcd v(n + m);
    v << plan.zeta, plan.d0;
    const double vnorm = v.norm();
    if (vnorm == 0.0 || plan.zeta.norm() == 0.0)
        throw std::invalid_argument("attack plan: null vector must have zeta != 0");

    Eigen::MatrixXcd R = rosenbrock_matrix(sys, plan.s0);
    const double scale = std::max(1.0, R.cwiseAbs().maxCoeff()) * vnorm;
    if ((R * v).norm() > rel_tol * scale)
        throw std::invalid_argument(
            "attack plan: Rosenbrock identity residual exceeds tolerance");

    Eigen::VectorXd expected =
        plan.x0 - (plan.l1 * plan.zeta.real() + plan.l2 * plan.zeta.imag());
    if ((plan.x_spoof - expected).lpNorm<Eigen::Infinity>() >
        1e-12 * std::max(1.0, expected.lpNorm<Eigen::Infinity>()))
        throw std::invalid_argument("attack plan: x_spoof is inconsistent");
}

}  // namespace cis
