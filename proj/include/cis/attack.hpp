#pragma once

#include <complex>

#include "cis/lti.hpp"
#include "cis/zeros.hpp"

namespace cis {

// A zero-dynamics attack: an input built on a transmission zero s0 and a
// Rosenbrock null vector (zeta, d0), paired with a spoofed initial state so
// the output cannot tell the attacked run from the spoofed nominal run.
struct AttackPlan {
    std::complex<double> s0;
    Eigen::VectorXcd d0;
    Eigen::VectorXcd zeta;
    double l1 = 1.0;
    double l2 = 0.0;
    Eigen::VectorXd x0;
    Eigen::VectorXd x_spoof;
    bool cone_feasible = false;

    // provenance
    double residual = 0.0;
    double tol_zero = kZeroTol;
    int multiplicity = 1;

    // d(t) = -l1 Re(e^{s0 t} d0) - l2 Im(e^{s0 t} d0)
    Eigen::VectorXd signal(double t) const;
};

// Real-zero attack d(t) = -e^{s0 t} d0 (l1 = 1, l2 = 0), x_spoof = x0 - zeta.
// `scale` multiplies the unit-norm null vector: null vectors are defined only
// up to scale and regression references fix one representative.
AttackPlan synth_real_attack(const LtiSystem& sys, double s0,
                             const Eigen::VectorXd& x0, double scale = 1.0);

// Complex-zero attack per the real/imaginary combination with weights
// (l1, l2) != (0, 0); x_spoof = x0 - (l1 Re zeta + l2 Im zeta).
AttackPlan synth_complex_attack(const LtiSystem& sys, std::complex<double> s0,
                                const Eigen::VectorXd& x0, double l1, double l2,
                                double scale = 1.0);

struct FeasibilityResult {
    bool feasible = false;
    AttackPlan plan;
};

// Cone compatibility of the attack signal: for a real zero the null vector
// sign is flipped so every component of d0 is <= 0 when possible (then
// d(t) >= 0 for all t); a complex zero oscillates and can never stay
// nonnegative.
FeasibilityResult cone_feasibility(const AttackPlan& plan, const LtiSystem& sys);

// Rosenbrock identity and bookkeeping checks; throws on violation.
void validate_plan(const AttackPlan& plan, const LtiSystem& sys,
                   double rel_tol = 1e-8);

}  // namespace cis
