#include "cis/zeros.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace cis {

namespace {

void check_square_system(const LtiSystem& sys) {
    sys.validate();
    if (sys.input_dim() != sys.output_dim())
        throw DimensionError(
            "transmission zeros are defined here for square systems (m = l)");
    if (sys.input_dim() < 1) throw DimensionError("system has no input/output channel");
}

double system_scale(const LtiSystem& sys) {
    double s = std::max(1.0, sys.A.cwiseAbs().maxCoeff());
    if (sys.B.size() > 0) s = std::max(s, sys.B.cwiseAbs().maxCoeff());
    if (sys.C.size() > 0) s = std::max(s, sys.C.cwiseAbs().maxCoeff());
    return s;
}

Eigen::MatrixXd rosenbrock_real(const LtiSystem& sys, double s0) {
    const int n = sys.state_dim(), m = sys.input_dim(), l = sys.output_dim();
    Eigen::MatrixXd R(n + l, n + m);
    R.topLeftCorner(n, n) = s0 * Eigen::MatrixXd::Identity(n, n) - sys.A;
    R.topRightCorner(n, m) = sys.B;
    R.bottomLeftCorner(l, n) = sys.C;
    R.bottomRightCorner(l, m).setZero();
    return R;
}

// Roots of a real-coefficient polynomial through its companion matrix.
// Coefficients in ascending order, c[d] != 0.
std::vector<std::complex<double>> companion_roots(const Eigen::VectorXd& c) {
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<std::complex<double>> roots;
    if (d < 1) return roots;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    companion.bottomLeftCorner(d - 1, d - 1).setIdentity();
    for (int j = 0; j < d; ++j) companion(j, d - 1) = -c(j) / c(d);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw SolverFailure("companion eigenvalue iteration failed");
    for (int k = 0; k < d; ++k) roots.push_back(es.eigenvalues()(k));
    return roots;
}

}  // namespace

double rank_drop_threshold(const LtiSystem& sys, double sigma_max, double tol) {
    // At a huge shift the leading singular value grows like |s0| while the
    // bordering rows stay O(1); capping by the system's own magnitude keeps
    // the test meaningful there.
    return tol * std::min(sigma_max, 100.0 * system_scale(sys));
}

Eigen::MatrixXcd rosenbrock_matrix(const LtiSystem& sys, std::complex<double> s0) {
    sys.validate();
    const int n = sys.state_dim(), m = sys.input_dim(), l = sys.output_dim();
    Eigen::MatrixXcd R(n + l, n + m);
    R.setZero();
    R.topLeftCorner(n, n) =
        s0 * Eigen::MatrixXcd::Identity(n, n) - sys.A.cast<std::complex<double>>();
    R.topRightCorner(n, m) = sys.B.cast<std::complex<double>>();
    R.bottomLeftCorner(l, n) = sys.C.cast<std::complex<double>>();
    return R;
}

namespace {

// Roots of q(w) = det(radius * w * E - N) from samples on the unit circle:
// an inverse DFT recovers the coefficients, the numerical degree truncation
// removes the pencil's structure at infinity, and a companion matrix does the
// rooting. Returns false iff the determinant vanished on the whole circle.
bool circle_fit_roots(const Eigen::MatrixXcd& N, const Eigen::MatrixXcd& E,
                      int max_degree, double radius,
                      std::vector<std::complex<double>>* out) {
    const int K = max_degree + 2;
    Eigen::VectorXcd vals(K);
    double vmax = 0.0;
    for (int k = 0; k < K; ++k) {
        const double theta = 2.0 * M_PI * k / K;
        const std::complex<double> w(std::cos(theta), std::sin(theta));
        vals(k) = Eigen::PartialPivLU<Eigen::MatrixXcd>(radius * w * E - N).determinant();
        vmax = std::max(vmax, std::abs(vals(k)));
    }
    if (vmax == 0.0 || !std::isfinite(vmax)) return false;
    vals /= vmax;

    Eigen::VectorXcd coeff(K);
    for (int j = 0; j < K; ++j) {
        std::complex<double> acc(0.0, 0.0);
        for (int k = 0; k < K; ++k) {
            const double theta = -2.0 * M_PI * j * k / K;
            acc += vals(k) * std::complex<double>(std::cos(theta), std::sin(theta));
        }
        coeff(j) = acc / double(K);
    }

    const double cmax = coeff.cwiseAbs().maxCoeff();
    if (cmax == 0.0) return false;
    int degree = -1;
    for (int j = K - 1; j >= 0; --j)
        if (std::abs(coeff(j)) > 1e-9 * cmax) {
            degree = j;
            break;
        }
    out->clear();
    if (degree <= 0) return true;  // constant determinant: no finite zeros

    Eigen::VectorXd real_coeff(degree + 1);
    for (int j = 0; j <= degree; ++j) real_coeff(j) = coeff(j).real();
    *out = companion_roots(real_coeff);
    for (auto& z : *out) z *= radius;
    return true;
}

// Newton polish on p(s) = det(sE - N) through the exact log-derivative
// p'(s)/p(s) = tr((sE - N)^{-1} E). Simple roots converge quadratically;
// multiple roots contract linearly, which the iteration count covers.
std::complex<double> newton_refine(const Eigen::MatrixXcd& N, const Eigen::MatrixXcd& E,
                                   std::complex<double> z, double scale) {
    for (int it = 0; it < 30; ++it) {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * E - N);
        const std::complex<double> slope = lu.solve(E).trace();
        if (!std::isfinite(std::abs(slope)) || std::abs(slope) == 0.0) break;
        const std::complex<double> step = 1.0 / slope;
        if (!std::isfinite(std::abs(step)) || std::abs(step) > 0.5 * scale) break;
        z -= step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace

// Finite eigenvalues of s*diag(I, 0) - [A, -B; -C, 0], which are the rank-loss
// points of the Rosenbrock matrix. The determinant polynomial is fitted on a
// circle sized by a first coarse pass (so small and large roots are balanced),
// then every root is Newton-polished on the exact determinant. This sidesteps
// QZ, which stalls or sheds spurious huge eigenvalue pairs on the Jordan
// chains at infinity these bordered pencils routinely carry.
std::vector<std::complex<double>> transmission_zeros(const LtiSystem& sys) {
    check_square_system(sys);
    const int n = sys.state_dim(), m = sys.input_dim();
    const int dim = n + m;
    const double scale = system_scale(sys);

    // An identically singular pencil means the output is decoupled from the
    // input; probe two generic shifts before trusting the determinant fit.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int degenerate_probes = 0;
    for (int probe = 0; probe < 2; ++probe) {
        std::complex<double> s(u(rng) * scale, u(rng) * scale);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rosenbrock_matrix(sys, s));
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-10 * sv(0)) ++degenerate_probes;
    }
    if (degenerate_probes == 2)
        throw DegeneratePencil(
            "the system pencil is singular at every shift; the output is "
            "decoupled from the input");

    Eigen::MatrixXcd N(dim, dim), E(dim, dim);
    N.setZero();
    E.setZero();
    N.topLeftCorner(n, n) = sys.A.cast<std::complex<double>>();
    N.topRightCorner(n, m) = -sys.B.cast<std::complex<double>>();
    N.bottomLeftCorner(m, n) = -sys.C.cast<std::complex<double>>();
    E.topLeftCorner(n, n).setIdentity();

    std::vector<std::complex<double>> zeros;
    if (!circle_fit_roots(N, E, n, 2.0 * scale, &zeros))
        throw DegeneratePencil("determinant vanished on the sample circle");

    if (!zeros.empty()) {
        // second pass with the circle shrunk to the root cloud, then polish
        double rmax = 0.0;
        for (const auto& z : zeros) rmax = std::max(rmax, std::abs(z));
        const double adapted = std::min(2.0 * scale, std::max(1.3 * rmax, 1e-3 * scale));
        std::vector<std::complex<double>> refit;
        if (adapted < 1.9 * scale && circle_fit_roots(N, E, n, adapted, &refit) &&
            refit.size() == zeros.size())
            zeros = refit;
        for (auto& z : zeros) z = newton_refine(N, E, z, scale);
    }

    std::sort(zeros.begin(), zeros.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return zeros;
}

NullVector rosenbrock_nullvector(const LtiSystem& sys, std::complex<double> s0,
                                 double tol) {
    sys.validate();
    const int n = sys.state_dim(), m = sys.input_dim();
    NullVector out;

    const bool real_shift = std::abs(s0.imag()) <= 1e-12 * (1.0 + std::abs(s0.real()));
    if (real_shift) {
        Eigen::MatrixXd R = rosenbrock_real(sys, s0.real());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const int last = static_cast<int>(sv.size()) - 1;
        out.sigma_ratio = sv(last) / sv(0);
        const double thresh = rank_drop_threshold(sys, sv(0), tol);
        if (sv(last) > thresh)
            throw NotAZero("shift is not a transmission zero (sigma_min = " +
                           std::to_string(sv(last)) + ")");
        int null_dim = 0;
        for (int k = 0; k <= last; ++k)
            if (sv(k) <= thresh) ++null_dim;
        Eigen::MatrixXd basis = svd.matrixV().rightCols(null_dim);
        Eigen::VectorXd v;
        if (null_dim == 1) {
            v = basis.col(0);
        } else {
            // pick the combination with the smallest input part
            Eigen::JacobiSVD<Eigen::MatrixXd> dsvd(basis.bottomRows(m),
                                                   Eigen::ComputeFullV);
            v = basis * dsvd.matrixV().col(null_dim - 1);
            v.normalize();
        }
        out.multiplicity = null_dim;
        out.zeta = v.head(n).cast<std::complex<double>>();
        out.d0 = v.tail(m).cast<std::complex<double>>();
        out.residual = (R * v).norm();
    } else {
        Eigen::MatrixXcd R = rosenbrock_matrix(sys, s0);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const int last = static_cast<int>(sv.size()) - 1;
        out.sigma_ratio = sv(last) / sv(0);
        const double thresh = rank_drop_threshold(sys, sv(0), tol);
        if (sv(last) > thresh)
            throw NotAZero("shift is not a transmission zero (sigma_min = " +
                           std::to_string(sv(last)) + ")");
        int null_dim = 0;
        for (int k = 0; k <= last; ++k)
            if (sv(k) <= thresh) ++null_dim;
        Eigen::MatrixXcd basis = svd.matrixV().rightCols(null_dim);
        Eigen::VectorXcd v;
        if (null_dim == 1) {
            v = basis.col(0);
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> dsvd(basis.bottomRows(m),
                                                    Eigen::ComputeFullV);
            v = basis * dsvd.matrixV().col(null_dim - 1);
            v.normalize();
        }
        out.multiplicity = null_dim;
        out.zeta = v.head(n);
        out.d0 = v.tail(m);
        out.residual = (R * v).norm();
    }

    if (out.zeta.norm() <= tol)
        throw SolverFailure(
            "null vector has no state component; the shift is an input-decoupling "
            "degeneracy rather than a usable zero");
    return out;
}

}  // namespace cis
