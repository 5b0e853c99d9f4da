#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

#include "cis/errors.hpp"

namespace cis {

enum class ConeKind { Orthant, Lorentz, PsdSvec, Polyhedral };

// Default absolute membership tolerance; membership queries scale it by
// max(1, ||x||_inf) before comparing.
inline constexpr double kMembershipTol = 1e-9;

// A proper cone K in R^n. PsdSvec is the PSD cone of symmetric matrices of
// a given order, embedded through svec (ambient dim = order*(order+1)/2).
// Polyhedral is {x : Mx >= 0} with M of full column rank (pointedness).
class ConeSpec {
public:
    static ConeSpec orthant(int dim);
    static ConeSpec lorentz(int dim);
    static ConeSpec psd(int order);
    static ConeSpec polyhedral(Eigen::MatrixXd facets);

    ConeKind kind() const { return kind_; }
    int ambient_dim() const { return ambient_dim_; }

    // PsdSvec only: the matrix order n with ambient_dim == n(n+1)/2.
    int psd_order() const;

    // Polyhedral only: the facet matrix M of {x : Mx >= 0}.
    const Eigen::MatrixXd& facet_matrix() const;

    const char* kind_name() const;

private:
    ConeSpec(ConeKind kind, int dim, int order, Eigen::MatrixXd facets);

    ConeKind kind_;
    int ambient_dim_;
    int psd_order_;
    Eigen::MatrixXd facets_;
};

// Symmetric vectorization: upper triangle in row-major order, off-diagonal
// entries scaled by sqrt(2) so that dot(svec X, svec Y) == Tr(XY).
Eigen::VectorXd svec(const Eigen::MatrixXd& X, double tol_sym = 1e-9);
Eigen::MatrixXd smat(const Eigen::VectorXd& x);

// Signed membership margin: >= 0 on K, > 0 on int K, < 0 outside.
// Orthant: min_i x_i; Lorentz: x_1 - ||x_{2..n}||; PsdSvec: lambda_min(smat x);
// Polyhedral: min(Mx).
double membership_margin(const ConeSpec& cone, const Eigen::VectorXd& x);

bool contains(const ConeSpec& cone, const Eigen::VectorXd& x,
              double tol = kMembershipTol);
bool contains_interior(const ConeSpec& cone, const Eigen::VectorXd& x,
                       double tol = kMembershipTol);

// Dual-cone membership. Orthant/Lorentz/PsdSvec are self-dual; Polyhedral
// uses a nonnegative least-squares decomposition y = M^T lambda, lambda >= 0.
bool dual_contains(const ConeSpec& cone, const Eigen::VectorXd& y,
                   double tol = kMembershipTol);

// Indices i (0-based) with e_i in K. Throws AssumptionViolated when empty:
// the placement theory has no candidate attack position to reason about.
std::vector<int> candidate_attack_set(const ConeSpec& cone,
                                      double tol = kMembershipTol);

// Indices j with e_j in K* (or int K* when interior_only). May be empty.
std::vector<int> candidate_sensor_set(const ConeSpec& cone, bool interior_only,
                                      double tol = kMembershipTol);

// Random elements of K / its boundary, and complementary boundary pairs
// (x, y) with x in K, y in K*, <y, x> = 0. Used by the sampled matrix-class
// checks and by property tests.
Eigen::VectorXd sample_point(const ConeSpec& cone, std::mt19937_64& rng);
Eigen::VectorXd sample_boundary(const ConeSpec& cone, std::mt19937_64& rng);
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_complementary_pair(
    const ConeSpec& cone, std::mt19937_64& rng);

// Lawson-Hanson nonnegative least squares: argmin_{x >= 0} ||Ax - b||_2.
// max_iter = 0 picks 3 * cols.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     int max_iter = 0);

}  // namespace cis
