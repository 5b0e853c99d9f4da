#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cis/cone.hpp"

namespace cis {

enum class TriState { Yes, No, Undetermined };

const char* to_string(TriState t);

// A piece of evidence attached to a verdict: a violating ray, a violating
// complementary pair, a boundary eigenvector, or a feasibility scalar.
struct Witness {
    std::string kind;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double value = 0.0;
};

struct CheckResult {
    TriState verdict = TriState::Undetermined;
    std::vector<Witness> evidence;
    std::string note;
};

struct ClassifyOptions {
    int samples = 1000;
    std::uint64_t seed = 0;
    double tol = kMembershipTol;
};

// A K-invariant? Exact for Orthant (sign test) and Lorentz (feasibility of
// A^T Q A - delta Q <= 0 in delta, decided by bisection); sampled over
// boundary rays for PsdSvec/Polyhedral (No with witness, otherwise
// Undetermined -- a sampled check cannot certify Yes).
CheckResult is_cone_invariant(const Eigen::MatrixXd& A, const ConeSpec& cone,
                              const ClassifyOptions& opts = {});

// A cross-positive over K? Exact for Orthant (Metzler test) and Lorentz
// (A^T Q + Q A - xi Q <= 0 in xi); sampled complementary pairs otherwise.
CheckResult is_cross_positive(const Eigen::MatrixXd& A, const ConeSpec& cone,
                              const ClassifyOptions& opts = {});

// A K-positive (maps K \ {0} into int K)? Exact for Orthant; sampled otherwise.
CheckResult is_k_positive(const Eigen::MatrixXd& A, const ConeSpec& cone,
                          const ClassifyOptions& opts = {});

// K-irreducibility: no eigenvector of A on the boundary of K. Orthant reduces
// to strong connectivity of the off-diagonal pattern. Other cones scan real
// eigenvectors (both signs); complex pairs are skipped and, if any were
// skipped without finding a violation, the verdict downgrades to Undetermined.
CheckResult is_irreducible(const Eigen::MatrixXd& A, const ConeSpec& cone,
                           const ClassifyOptions& opts = {});

struct DominantEigenpair {
    double mu = 0.0;
    Eigen::VectorXd right;
    Eigen::VectorXd left;
    bool right_in_cone = false;
    bool left_in_dual = false;
    std::string warning;
};

// Largest-real-part eigenvalue with right/left eigenvectors sign-fixed into
// K and K*. Throws SolverFailure when the dominant eigenvalue is complex
// beyond tolerance (the cross-positivity precondition was violated).
DominantEigenpair dominant_eigenpair(const Eigen::MatrixXd& A, const ConeSpec& cone,
                                     double tol = 1e-8);

// (s0 I - A)^{-1} K-invariance for Hurwitz A and s0 >= 0.
CheckResult resolvent_is_cone_invariant(const Eigen::MatrixXd& A, const ConeSpec& cone,
                                        double s0, const ClassifyOptions& opts = {});

struct ClassReport {
    TriState cone_invariant = TriState::Undetermined;
    TriState cross_positive = TriState::Undetermined;
    TriState irreducible = TriState::Undetermined;
    TriState k_positive = TriState::Undetermined;
    double dominant_eig = 0.0;
    Eigen::VectorXd dominant_right;
    Eigen::VectorXd dominant_left;
    std::vector<Witness> evidence;
    std::vector<std::string> notes;
};

ClassReport classify(const Eigen::MatrixXd& A, const ConeSpec& cone,
                     const ClassifyOptions& opts = {});

double max_real_eigenvalue(const Eigen::MatrixXd& A);
bool is_hurwitz(const Eigen::MatrixXd& A, double tol = 1e-9);

}  // namespace cis
