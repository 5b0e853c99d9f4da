#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cis/cone.hpp"
#include "cis/matrices.hpp"

namespace cis {

// State-space triple dx = Ax + Bu, y = Cx, with an optional invariance cone.
struct LtiSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;  // n x m
    Eigen::MatrixXd C;  // l x n
    std::optional<ConeSpec> cone;

    int state_dim() const { return static_cast<int>(A.rows()); }
    int input_dim() const { return static_cast<int>(B.cols()); }
    int output_dim() const { return static_cast<int>(C.rows()); }

    void validate() const;
};

Eigen::VectorXd basis_vector(int n, int i);

// Which canonical basis vector v equals, if any (0-based).
std::optional<int> basis_index(const Eigen::VectorXd& v, double tol = 1e-12);

// Convenience builder for single-attack/single-sensor verification.
LtiSystem siso_system(const Eigen::MatrixXd& A, int b_index, int c_index,
                      std::optional<ConeSpec> cone = std::nullopt);

struct ConeSystemCheck {
    TriState a_cross_positive = TriState::Undetermined;
    bool b_in_cone = false;
    bool c_in_dual = false;
};

// The cone-invariance triple test: A cross-positive, columns of B in K,
// rows of C in K*.
ConeSystemCheck cone_system_check(const LtiSystem& sys,
                                  const ClassifyOptions& opts = {});

}  // namespace cis
