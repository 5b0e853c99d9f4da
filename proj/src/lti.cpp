#include "cis/lti.hpp"

namespace cis {

void LtiSystem::validate() const {
    if (A.rows() != A.cols()) throw DimensionError("system: A must be square");
    if (A.rows() < 1) throw DimensionError("system: empty state");
    if (B.rows() != A.rows())
        throw DimensionError("system: B row count must equal the state dimension");
    if (C.cols() != A.cols())
        throw DimensionError("system: C column count must equal the state dimension");
    if (cone && cone->ambient_dim() != A.rows())
        throw DimensionError("system: cone dimension does not match the state");
}

Eigen::VectorXd basis_vector(int n, int i) {
    if (i < 0 || i >= n) throw DimensionError("basis_vector: index out of range");
    return Eigen::VectorXd::Unit(n, i);
}

std::optional<int> basis_index(const Eigen::VectorXd& v, double tol) {
    int idx = -1;
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i) - 1.0) <= tol) {
            if (idx >= 0) return std::nullopt;
            idx = i;
        } else if (std::abs(v(i)) > tol) {
            return std::nullopt;
        }
    }
    if (idx < 0) return std::nullopt;
    return idx;
}

LtiSystem siso_system(const Eigen::MatrixXd& A, int b_index, int c_index,
                      std::optional<ConeSpec> cone) {
    const int n = static_cast<int>(A.rows());
    LtiSystem sys;
    sys.A = A;
    sys.B = basis_vector(n, b_index);
    sys.C = basis_vector(n, c_index).transpose();
    sys.cone = std::move(cone);
    sys.validate();
    return sys;
}

ConeSystemCheck cone_system_check(const LtiSystem& sys, const ClassifyOptions& opts) {
    sys.validate();
    if (!sys.cone) throw std::invalid_argument("cone_system_check: system has no cone");
    ConeSystemCheck out;
    out.a_cross_positive = is_cross_positive(sys.A, *sys.cone, opts).verdict;
    out.b_in_cone = true;
    for (int j = 0; j < sys.input_dim(); ++j)
        out.b_in_cone = out.b_in_cone && contains(*sys.cone, sys.B.col(j), opts.tol);
    out.c_in_dual = true;
    for (int i = 0; i < sys.output_dim(); ++i)
        out.c_in_dual =
            out.c_in_dual && dual_contains(*sys.cone, sys.C.row(i).transpose(), opts.tol);
    return out;
}

}  // namespace cis
