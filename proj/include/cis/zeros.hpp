#pragma once

#include <complex>
#include <vector>

#include "cis/lti.hpp"

namespace cis {

// Relative singular-value threshold certifying a shift as a zero of the pencil.
inline constexpr double kZeroTol = 1e-7;

// Rosenbrock system matrix [s0 I - A, B; C, 0].
Eigen::MatrixXcd rosenbrock_matrix(const LtiSystem& sys, std::complex<double> s0);

// Singular-value threshold below which the Rosenbrock matrix counts as
// rank-deficient. Capped by the system's own magnitude so that huge shifts
// (where sigma_max grows like |s0|) cannot certify spurious zeros.
double rank_drop_threshold(const LtiSystem& sys, double sigma_max,
                           double tol = kZeroTol);

// Finite transmission zeros of a square system, from the generalized
// eigenvalues of the pencil s*diag(I, 0) - [A, -B; -C, 0]. Sorted by real
// part descending; conjugate pairs are both present. Throws DegeneratePencil
// when the pencil is singular for every s.
std::vector<std::complex<double>> transmission_zeros(const LtiSystem& sys);

struct NullVector {
    Eigen::VectorXcd zeta;  // state part
    Eigen::VectorXcd d0;    // input part
    int multiplicity = 1;   // dimension of the numerical null space
    double residual = 0.0;  // ||R(s0) [zeta; d0]||
    double sigma_ratio = 0.0;  // sigma_min / sigma_max at s0
};

// Unit-norm null vector of the Rosenbrock matrix at a certified zero s0.
// Real s0 uses a real SVD so the vector comes out real. When the null space
// has dimension > 1, the returned vector minimizes ||d0|| over the computed
// null basis and the multiplicity is reported. Throws NotAZero when s0 is
// not a zero within tol.
NullVector rosenbrock_nullvector(const LtiSystem& sys, std::complex<double> s0,
                                 double tol = kZeroTol);

}  // namespace cis
